#pragma once

#include <atomic>
#include <string>
#include <vector>

#include "warrantscore/gateway.hpp"

namespace warrantscore::gateway {

// Fully deterministic offline backend. Every reply is a pure function of
// (role tag, prompt text) through a keyed FNV-1a hash, so repeated corpus
// runs are bit-identical:
//   generator/summarizer -> pseudo-prose derived from the hash
//   acceptability        -> positive label with 3/4 frequency
//   judge                -> "1".."4", uniform over prompts
//   embedder             -> unit-norm vector seeded by each text
class MockGateway final : public Gateway {
public:
    std::string chat_complete(const BackendProfile& profile,
                              const std::string& prompt,
                              std::optional<int> max_tokens = std::nullopt) override;

    std::vector<EmbeddingVector> embed(const BackendProfile& profile,
                                       const std::vector<std::string>& texts) override;

    // Total gateway calls (each chat completion and each embed batch is one).
    long calls() const { return calls_.load(); }
    void reset_calls() { calls_.store(0); }

private:
    std::atomic<long> calls_{0};
};

// The vector the mock embedder assigns to `text`: components from a
// splitmix64 stream seeded by the text hash, normalized to unit length.
// Exposed so oracles can recompute cosine similarities independently.
std::vector<double> mock_embedding(const std::string& text, int dimension);

} // namespace warrantscore::gateway
