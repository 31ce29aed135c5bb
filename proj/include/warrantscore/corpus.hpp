#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "warrantscore/gateway.hpp"
#include "warrantscore/types.hpp"

// Dataset loading, deduplication and the elongated-review builder.
namespace warrantscore::corpus {

struct LoadDiagnostic {
    long line = 0; // 1-based
    std::string message;
};

struct LoadResult {
    std::vector<Review> reviews;
    std::vector<LoadDiagnostic> diagnostics;
};

// Canonical JSON Lines corpus. Per-line parse and validation errors are
// collected with line numbers and the valid lines kept. Throws DataError on
// an unreadable file, duplicate review ids, or >50% invalid lines
// ("corrupt corpus").
LoadResult load_corpus(const std::filesystem::path& path, std::string_view format = "jsonl");

struct DedupResult {
    std::vector<Review> reviews;
    std::vector<std::string> diagnostics;
};

// Collapses reviews with identical text to the first occurrence, merging
// human_scores per aspect by concatenating annotator lists. Conflicting
// sufficiency labels merge with a diagnostic. Idempotent.
DedupResult dedup_reviews(const std::vector<Review>& reviews);

inline constexpr std::string_view kElongatedIdSuffix = "-elongated";
inline constexpr std::string_view kElongationSeparator = "\n\n";

// New review with variant = elongated, id suffixed, and the gateway-generated
// summary appended after the separator. Claims and spans are copied
// unchanged: the appended tail carries no annotations, so every original
// span still slices the same text.
Review build_elongated(const Review& review, gateway::Gateway& gw,
                       const gateway::BackendProfile& summarizer);

} // namespace warrantscore::corpus
