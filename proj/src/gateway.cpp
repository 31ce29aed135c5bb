#include "warrantscore/gateway.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "warrantscore/errors.hpp"

namespace warrantscore::gateway {

std::string to_string(Role role) {
    switch (role) {
        case Role::generator: return "generator";
        case Role::acceptability: return "acceptability";
        case Role::judge: return "judge";
        case Role::embedder: return "embedder";
        case Role::summarizer: return "summarizer";
    }
    return "generator";
}

Role role_from_string(const std::string& s) {
    if (s == "generator") return Role::generator;
    if (s == "acceptability") return Role::acceptability;
    if (s == "judge") return Role::judge;
    if (s == "embedder") return Role::embedder;
    if (s == "summarizer") return Role::summarizer;
    throw ConfigError("unknown backend role: " + s);
}

void validate_profile(const BackendProfile& profile) {
    if (profile.kind != "mock" && profile.kind != "http") {
        throw ConfigError("unknown backend kind: " + profile.kind);
    }
    if (profile.temperature < 0.0) throw ConfigError("temperature must be >= 0");
    if (profile.retry.retries < 0) throw ConfigError("retries must be >= 0");
    if (profile.kind == "http") {
        if (profile.endpoint.empty()) throw ConfigError("http backend needs an endpoint");
        if (!profile.api_key_env.empty() && std::getenv(profile.api_key_env.c_str()) == nullptr) {
            throw ConfigError("api key env var not set: " + profile.api_key_env);
        }
    }
    if (profile.embedding_dimension < 1) throw ConfigError("embedding dimension must be >= 1");
}

namespace {

std::string normalize_label(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

} // namespace

bool classify_binary(Gateway& gw, const BackendProfile& profile, const std::string& prompt) {
    const std::string reply = gw.chat_complete(profile, prompt, 2);
    const std::string normalized = normalize_label(reply);
    if (normalized == normalize_label(profile.positive_label)) return true;
    if (normalized == normalize_label(profile.negative_label)) return false;
    throw ProtocolError("classifier reply matches neither label: '" + reply + "'");
}

double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw DataError("embedding dimension mismatch");
    if (u.empty()) throw DataError("empty embedding");
    double dot = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw DataError("zero vector has no direction");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

} // namespace warrantscore::gateway
