#pragma once

#include <optional>
#include <vector>

#include "warrantscore/types.hpp"

// The substantiation metric family plus the coherence baseline.
//
//   supported_claims = sum(support_score(c_n)) / |C|
//   substan_score    = supported_claims * len(review)
//   warrant_rate     = sum(V(w_n) * support_score(c_n)) / |C|
//   warrant_score    = warrant_rate * len(review)
//   coherence_rate   = sum(Sem(c_n, e_n) * support_score(c_n)) / |C|
//
// A claimless review scores 0 on every rate with the no_claims flag set
// rather than erroring, so corpus-scale runs stay total.
namespace warrantscore::metrics {

struct RateResult {
    double value = 0.0;
    bool no_claims = false;
};

// 0 iff evidence absent, else 1.
int support_score(const ClaimUnit& claim);

RateResult supported_claims(const Review& review);
RateResult substan_score(const Review& review);

// Throws DataError("warrant/claim mismatch") when the sidecar is misaligned.
RateResult warrant_rate(const Review& review, const std::vector<WarrantRecord>& warrants);
RateResult warrant_score(const Review& review, const std::vector<WarrantRecord>& warrants);

// `similarities` is aligned with claims and must be present exactly where
// evidence is present; a missing value for an evidenced claim throws.
RateResult coherence_rate(const Review& review,
                          const std::vector<std::optional<double>>& similarities);
RateResult coherence_score(const Review& review,
                           const std::vector<std::optional<double>>& similarities);

// Full per-review report. `similarities == nullptr` sets the no_embeddings
// flag and zeroes the coherence metrics. Throws DataError on zero-word text
// (fre/ttr undefined).
MetricReport compute_report(const Review& review,
                            const std::vector<WarrantRecord>& warrants,
                            const std::vector<std::optional<double>>* similarities);

} // namespace warrantscore::metrics
