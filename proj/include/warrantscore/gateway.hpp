#pragma once

#include <optional>
#include <string>
#include <vector>

#include "warrantscore/types.hpp"

// Uniform access to chat-completion, binary-classification and embedding
// backends. Two implementations: HttpGateway (chat-completions HTTP JSON
// wire shape) and MockGateway (deterministic, offline).
namespace warrantscore::gateway {

enum class Role { generator, acceptability, judge, embedder, summarizer };

std::string to_string(Role role);
Role role_from_string(const std::string& s);

struct RetryPolicy {
    int retries = 2; // transport/5xx retries beyond the first attempt
    int initial_backoff_ms = 100;
    double backoff_multiplier = 2.0;
};

struct BackendProfile {
    std::string kind = "mock"; // "mock" or "http"
    Role role = Role::generator;
    std::string endpoint;    // base URL, e.g. http://localhost:8080
    std::string model;       // model id sent on the wire and recorded in provenance
    std::string api_key_env; // name of the env var holding the key; empty = none
    double temperature = 0.0;
    std::optional<int> max_output_tokens;
    int timeout_ms = 30000;
    RetryPolicy retry;
    int embedding_dimension = 64; // mock embedder only
    std::string positive_label = "yes";
    std::string negative_label = "no";
};

// Throws ConfigError on violated profile invariants (temperature < 0,
// retries < 0, http profile without endpoint, named api key env unset).
void validate_profile(const BackendProfile& profile);

struct EmbeddingVector {
    std::vector<double> values;
    std::string model;
};

class Gateway {
public:
    virtual ~Gateway() = default;

    // Assistant text for `prompt`. `max_tokens` overrides the profile's
    // max_output_tokens for this call (the judge and the acceptability
    // classifier cap replies at 2 tokens).
    virtual std::string chat_complete(const BackendProfile& profile,
                                      const std::string& prompt,
                                      std::optional<int> max_tokens = std::nullopt) = 0;

    // One vector per text, order preserving, all of one dimension.
    virtual std::vector<EmbeddingVector> embed(const BackendProfile& profile,
                                               const std::vector<std::string>& texts) = 0;
};

// Reply capped at 2 output tokens, normalized (case/whitespace) and matched
// against the profile's positive/negative labels. Throws ProtocolError when
// the reply matches neither; the caller decides the fallback.
bool classify_binary(Gateway& gw, const BackendProfile& profile, const std::string& prompt);

// dot(u, v) / (|u| |v|). Throws DataError on dimension mismatch or a zero
// vector. Result is used raw (no clamping), range [-1, 1].
double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v);

} // namespace warrantscore::gateway
