#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "warrantscore/types.hpp"

// Span codec for consuming external tagger output: BIO decoding, span
// trimming, span-level P/R/F1 and QA-style EM/F1.
namespace warrantscore::spans {

enum class BioTag { B, I, O };

BioTag bio_tag_from_string(const std::string& s);
std::string to_string(BioTag tag);

struct BioTagSequence {
    std::vector<std::string> tokens;
    std::vector<BioTag> tags;           // aligned with tokens
    std::vector<std::size_t> offsets;   // code-point offsets into the source text
    std::optional<std::size_t> text_length; // when known, offsets are bounds-checked
};

struct DecodedSpans {
    std::vector<Span> spans; // one per maximal B (I)* run, non-overlapping
    int dropped_orphans = 0; // I tags with no live span; they start nothing
};

// Throws DataError on misaligned lengths or non-increasing/out-of-bounds
// offsets. A span covers [offset(first token), offset(last) + len(last)).
DecodedSpans decode_bio(const BioTagSequence& seq);

// Smallest subspan whose first and last characters are neither whitespace
// nor punctuation; may come back empty (start == end) for all-punctuation
// spans. Idempotent, never widens.
Span trim_span(std::string_view text, Span span);

struct SpanPrf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Exact-match span counting. Empty pred scores precision 0 unless gold is
// also empty (then all three are 1); empty gold mirrors for recall.
SpanPrf span_prf(const std::vector<Span>& predicted, const std::vector<Span>& gold);

struct QaScore {
    double em = 0.0;
    double token_f1 = 0.0;
};

// em: normalized string equality (lowercase, edge punctuation strip,
// whitespace collapse). token_f1: harmonic mean of token-overlap precision
// and recall with multiplicity.
QaScore qa_em_f1(std::string_view predicted, std::string_view gold);

} // namespace warrantscore::spans
