#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "warrantscore/gateway.hpp"

namespace warrantscore::gateway {

// JSON Lines request/response audit log. Secrets are redacted by
// construction: only endpoint, model, status, attempt counts and sizes are
// written, never headers or bodies.
class AuditLogger {
public:
    explicit AuditLogger(std::string path);
    void log(const std::string& line);

private:
    std::string path_;
    std::mutex mutex_;
};

// Chat-completions / embeddings HTTP JSON backend. Retries transport errors
// and 5xx responses per the profile's RetryPolicy with exponential backoff;
// 4xx responses and malformed bodies raise ProtocolError without retry.
// Shareable across threads (one connection per request).
class HttpGateway final : public Gateway {
public:
    HttpGateway() = default;
    explicit HttpGateway(std::shared_ptr<AuditLogger> audit);

    std::string chat_complete(const BackendProfile& profile,
                              const std::string& prompt,
                              std::optional<int> max_tokens = std::nullopt) override;

    std::vector<EmbeddingVector> embed(const BackendProfile& profile,
                                       const std::vector<std::string>& texts) override;

private:
    std::string post_json(const BackendProfile& profile, const std::string& path,
                          const std::string& body);

    std::shared_ptr<AuditLogger> audit_;
};

} // namespace warrantscore::gateway
