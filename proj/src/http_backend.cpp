#include "warrantscore/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "warrantscore/errors.hpp"

namespace warrantscore::gateway {

using nlohmann::ordered_json;

AuditLogger::AuditLogger(std::string path) : path_(std::move(path)) {}

void AuditLogger::log(const std::string& line) {
    std::lock_guard<std::mutex> lock(mutex_);
    std::ofstream out(path_, std::ios::app);
    out << line << '\n';
}

HttpGateway::HttpGateway(std::shared_ptr<AuditLogger> audit) : audit_(std::move(audit)) {}

namespace {

struct ParsedEndpoint {
    std::string base;        // scheme://host[:port]
    std::string path_prefix; // anything after the authority
};

ParsedEndpoint parse_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must include a scheme: " + endpoint);
    }
    const auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, ""};
    std::string prefix = endpoint.substr(path_start);
    if (prefix == "/") prefix.clear();
    return {endpoint.substr(0, path_start), prefix};
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

} // namespace

std::string HttpGateway::post_json(const BackendProfile& profile, const std::string& path,
                                   const std::string& body) {
    const ParsedEndpoint endpoint = parse_endpoint(profile.endpoint);
    httplib::Client client(endpoint.base);
    client.set_connection_timeout(profile.timeout_ms / 1000, (profile.timeout_ms % 1000) * 1000);
    client.set_read_timeout(profile.timeout_ms / 1000, (profile.timeout_ms % 1000) * 1000);

    httplib::Headers headers;
    if (!profile.api_key_env.empty()) {
        const char* key = std::getenv(profile.api_key_env.c_str());
        if (key == nullptr) throw ConfigError("api key env var not set: " + profile.api_key_env);
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    const std::string url_path = endpoint.path_prefix + path;
    std::string last_error;
    int backoff_ms = profile.retry.initial_backoff_ms;

    for (int attempt = 0; attempt <= profile.retry.retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms = static_cast<int>(backoff_ms * profile.retry.backoff_multiplier);
        }
        auto res = client.Post(url_path, headers, body, "application/json");
        if (audit_) {
            ordered_json entry = {{"timestamp", iso_now()},
                                  {"endpoint", profile.endpoint},
                                  {"path", path},
                                  {"model", profile.model},
                                  {"attempt", attempt},
                                  {"status", res ? res->status : 0},
                                  {"request_bytes", body.size()}};
            audit_->log(entry.dump());
        }
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue; // transport error: retry
        }
        if (res->status >= 500) {
            last_error = "server status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw ProtocolError("endpoint " + profile.endpoint + " answered status " +
                                std::to_string(res->status));
        }
        return res->body;
    }
    throw TransportError("request to " + profile.endpoint + " failed after " +
                         std::to_string(profile.retry.retries + 1) + " attempts: " + last_error);
}

std::string HttpGateway::chat_complete(const BackendProfile& profile, const std::string& prompt,
                                       std::optional<int> max_tokens) {
    ordered_json request = {{"model", profile.model},
                            {"messages", ordered_json::array({ordered_json{
                                             {"role", "user"}, {"content", prompt}}})},
                            {"temperature", profile.temperature}};
    if (max_tokens) {
        request["max_tokens"] = *max_tokens;
    } else if (profile.max_output_tokens) {
        request["max_tokens"] = *profile.max_output_tokens;
    }

    const std::string body = post_json(profile, "/v1/chat/completions", request.dump());
    const ordered_json reply = ordered_json::parse(body, nullptr, false);
    if (reply.is_discarded()) throw ProtocolError("non-JSON chat completion body");
    try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const ordered_json::exception&) {
        throw ProtocolError("chat completion body missing choices[0].message.content");
    }
}

std::vector<EmbeddingVector> HttpGateway::embed(const BackendProfile& profile,
                                                const std::vector<std::string>& texts) {
    if (texts.empty()) throw DataError("embed needs at least one text");
    ordered_json request = {{"model", profile.model}, {"input", texts}};
    const std::string body = post_json(profile, "/v1/embeddings", request.dump());
    const ordered_json reply = ordered_json::parse(body, nullptr, false);
    if (reply.is_discarded()) throw ProtocolError("non-JSON embeddings body");

    std::vector<EmbeddingVector> out(texts.size());
    try {
        const auto& data = reply.at("data");
        if (data.size() != texts.size()) throw ProtocolError("embedding count mismatch");
        for (const auto& item : data) {
            const auto index = item.at("index").get<std::size_t>();
            if (index >= out.size()) throw ProtocolError("embedding index out of range");
            out[index] = {item.at("embedding").get<std::vector<double>>(), profile.model};
        }
    } catch (const ordered_json::exception&) {
        throw ProtocolError("embeddings body missing data[].embedding");
    }
    std::size_t dim = out.front().values.size();
    for (const EmbeddingVector& v : out) {
        if (v.values.size() != dim) throw DataError("embedding dimension mismatch across batch");
    }
    return out;
}

} // namespace warrantscore::gateway
