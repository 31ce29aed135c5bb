#pragma once

#include <optional>
#include <string>
#include <vector>

#include "warrantscore/stats.hpp"
#include "warrantscore/types.hpp"

namespace warrantscore::stats {

// The fixed metric order used by every emitted table.
const std::vector<std::string>& metric_order();

// MetricReport field by metric name; throws DataError on unknown names.
double metric_value(const MetricReport& report, const std::string& metric);

struct CorrelationCell {
    std::string metric;
    std::optional<double> rho; // absent when the correlation is undefined
    std::string note;          // reason a cell is undefined
};

// Spearman of each metric column against max-aggregated human scores for
// `aspect`. Reports and reviews are matched by review_id; every review must
// carry the aspect. Undefined cells are marked, not fatal.
std::vector<CorrelationCell> correlation_table(const std::vector<MetricReport>& reports,
                                               const std::vector<Review>& reviews,
                                               const std::string& aspect);

struct GroupComparison {
    std::string metric;
    std::string group_a;
    std::string group_b;
    long n_a = 0;
    long n_b = 0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    std::optional<double> t;
    std::optional<double> p;
    std::optional<double> d;
    std::string kind; // "independent_one_sided" or "paired_two_sided"
    std::string note;
};

// sufficient vs deficient groups: one-sided independent t (a = sufficient),
// Cohen's d with the sufficient - deficient sign convention.
std::vector<GroupComparison> sufficiency_comparison(const std::vector<MetricReport>& reports,
                                                    const std::vector<Review>& reviews);

// original vs elongated pairs: two-sided paired t, Cohen's d with the
// original - elongated sign convention. `pairs` maps original review_id to
// elongated review_id; unpaired ids are an error listing them.
std::vector<GroupComparison> paired_comparison(
    const std::vector<MetricReport>& original_reports,
    const std::vector<MetricReport>& elongated_reports,
    const std::vector<std::pair<std::string, std::string>>& pairs);

} // namespace warrantscore::stats
