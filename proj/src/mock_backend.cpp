#include "warrantscore/mock_backend.hpp"

#include <cctype>
#include <cmath>

#include "warrantscore/errors.hpp"
#include "warrantscore/hash.hpp"

namespace warrantscore::gateway {

namespace {

constexpr char kKeySeparator = '\x1f';

std::uint64_t keyed_hash(Role role, const std::string& prompt) {
    return fnv1a64(to_string(role) + kKeySeparator + prompt);
}

// Filler vocabulary for pseudo-prose replies.
const char* const kWords[] = {
    "the",      "results",   "method",     "analysis",  "claims",     "evidence",
    "baseline", "review",    "model",      "experiments", "clearly",  "support",
    "suggest",  "improve",   "compared",   "reported",  "significant", "consistent",
    "findings", "approach",  "evaluation", "metrics",   "quality",    "presented",
    "datasets", "overall",   "novel",      "limited",   "strong",     "reliable",
};
constexpr std::size_t kWordCount = sizeof(kWords) / sizeof(kWords[0]);

std::string derive_sentence(std::uint64_t& state, int min_words, int max_words) {
    const int n = min_words + static_cast<int>(splitmix64(state) %
                                               static_cast<std::uint64_t>(max_words - min_words + 1));
    std::string out;
    for (int i = 0; i < n; ++i) {
        std::string word = kWords[splitmix64(state) % kWordCount];
        if (i == 0) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
        if (!out.empty()) out.push_back(' ');
        out += word;
    }
    out.push_back('.');
    return out;
}

} // namespace

std::string MockGateway::chat_complete(const BackendProfile& profile, const std::string& prompt,
                                       std::optional<int> /*max_tokens*/) {
    calls_.fetch_add(1);
    std::uint64_t h = keyed_hash(profile.role, prompt);
    std::uint64_t state = h;
    switch (profile.role) {
        case Role::judge:
            return std::to_string(1 + static_cast<int>(h % 4));
        case Role::acceptability:
            // Positive with 3/4 frequency, so a small fraction of warrant
            // slots exhaust all attempts offline too.
            return (h % 4) != 0 ? profile.positive_label : profile.negative_label;
        case Role::generator:
            return derive_sentence(state, 8, 16);
        case Role::summarizer: {
            std::string summary = derive_sentence(state, 15, 25);
            summary.push_back(' ');
            summary += derive_sentence(state, 15, 25);
            return summary;
        }
        case Role::embedder:
            throw ConfigError("embedder profiles do not answer chat completions");
    }
    throw ConfigError("unreachable role");
}

std::vector<double> mock_embedding(const std::string& text, int dimension) {
    std::uint64_t state = fnv1a64("embedder" + std::string(1, kKeySeparator) + text);
    std::vector<double> values(static_cast<std::size_t>(dimension));
    double norm_sq = 0.0;
    for (double& v : values) {
        v = 2.0 * splitmix_unit(state) - 1.0;
        norm_sq += v * v;
    }
    const double norm = std::sqrt(norm_sq);
    for (double& v : values) v /= norm;
    return values;
}

std::vector<EmbeddingVector> MockGateway::embed(const BackendProfile& profile,
                                                const std::vector<std::string>& texts) {
    if (texts.empty()) throw DataError("embed needs at least one text");
    calls_.fetch_add(1);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        out.push_back({mock_embedding(text, profile.embedding_dimension), profile.model});
    }
    return out;
}

} // namespace warrantscore::gateway
