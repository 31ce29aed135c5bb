#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "warrantscore/types.hpp"

namespace warrantscore::metrics {

struct RandomBaselineConfig {
    long trials = 20000;
    std::uint64_t seed = 0;
    double percentile = 50.0; // in (0, 100)
    // Test hook: when set, every draw returns this value instead of a
    // uniform sample from {1,2,3,4}.
    std::optional<int> force_value;
};

enum class BaselineMode { rate, score };

struct RandomBaselineResult {
    double percentile_correlation = 0.0;
    long trials = 0;
    long undefined_trials = 0; // trials whose Spearman was undefined, excluded
    double percentile_q = 50.0;
    BaselineMode mode = BaselineMode::rate;
    std::uint64_t seed = 0;
};

// For each trial: draw r uniformly from {1,2,3,4} per evidenced claim,
// compute the per-review random rate (times len(review) in score mode),
// and take the Spearman correlation with the human scores; the result is
// the cfg.percentile-th percentile of the per-trial correlations.
//
// Pure function of (reviews, human_scores, cfg, mode): trial t draws from a
// generator derived from (seed, t), so results are schedule-independent.
// Throws DataError when no trial admits a defined correlation (degenerate
// baseline: e.g. no review has an evidenced claim).
RandomBaselineResult random_baseline_correlation(const std::vector<Review>& reviews,
                                                 const std::vector<double>& human_scores,
                                                 const RandomBaselineConfig& cfg,
                                                 BaselineMode mode);

} // namespace warrantscore::metrics
