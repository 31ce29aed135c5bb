#include "warrantscore/random_baseline.hpp"

#include "warrantscore/errors.hpp"
#include "warrantscore/hash.hpp"
#include "warrantscore/metrics.hpp"
#include "warrantscore/stats.hpp"
#include "warrantscore/text_stats.hpp"

namespace warrantscore::metrics {

RandomBaselineResult random_baseline_correlation(const std::vector<Review>& reviews,
                                                 const std::vector<double>& human_scores,
                                                 const RandomBaselineConfig& cfg,
                                                 BaselineMode mode) {
    if (reviews.size() != human_scores.size()) {
        throw DataError("review/human score length mismatch");
    }
    if (reviews.size() < 3) throw DataError("need at least 3 reviews");
    if (cfg.trials < 1) throw DataError("trials must be >= 1");
    if (cfg.percentile <= 0.0 || cfg.percentile >= 100.0) {
        throw DataError("percentile must be in (0, 100)");
    }

    bool any_evidenced = false;
    std::vector<long> lens(reviews.size(), 0);
    for (std::size_t i = 0; i < reviews.size(); ++i) {
        lens[i] = text::word_count(reviews[i].text);
        for (const ClaimUnit& claim : reviews[i].claims) {
            if (claim.evidence) any_evidenced = true;
        }
    }
    if (!any_evidenced) throw DataError("degenerate baseline");

    std::vector<double> correlations;
    correlations.reserve(static_cast<std::size_t>(cfg.trials));
    long undefined = 0;
    std::vector<double> metric(reviews.size(), 0.0);

    for (long trial = 0; trial < cfg.trials; ++trial) {
        // Per-trial stream derived from (seed, trial): schedule-independent.
        std::uint64_t state = cfg.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1));
        for (std::size_t i = 0; i < reviews.size(); ++i) {
            const Review& review = reviews[i];
            if (review.claims.empty()) {
                metric[i] = 0.0;
                continue;
            }
            double sum = 0.0;
            for (const ClaimUnit& claim : review.claims) {
                if (!claim.evidence) continue;
                const int r = cfg.force_value
                                  ? *cfg.force_value
                                  : 1 + static_cast<int>(splitmix64(state) % 4);
                sum += static_cast<double>(r) * 0.25;
            }
            metric[i] = sum / static_cast<double>(review.claims.size());
            if (mode == BaselineMode::score) metric[i] *= static_cast<double>(lens[i]);
        }
        try {
            correlations.push_back(stats::spearman(metric, human_scores));
        } catch (const DataError&) {
            ++undefined; // constant metric vector this trial
        }
    }

    if (correlations.empty()) throw DataError("degenerate baseline");

    RandomBaselineResult result;
    result.percentile_correlation = stats::percentile(correlations, cfg.percentile);
    result.trials = cfg.trials;
    result.undefined_trials = undefined;
    result.percentile_q = cfg.percentile;
    result.mode = mode;
    result.seed = cfg.seed;
    return result;
}

} // namespace warrantscore::metrics
