#pragma once

#include <vector>

// Rank correlation, t-tests, effect sizes and score aggregation behind the
// correlation and robustness experiments. Pure functions; undefined
// statistics throw DataError.
namespace warrantscore::stats {

// Maximum annotator score; the aggregation rule for human score lists.
int aggregate_max(const std::vector<int>& scores);

// Average ranks (ties receive the mean of their rank block), 1-based.
std::vector<double> average_ranks(const std::vector<double>& values);

// Pearson correlation of average-ranked values. Requires equal lengths
// >= 3 and neither list constant.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
};

// Two-sample Student t (pooled variance), one-sided p for mean(a) > mean(b).
// Each group needs >= 2 values and a nonzero pooled variance.
TTestResult t_test_independent_one_sided(const std::vector<double>& a,
                                         const std::vector<double>& b);

// One-sample t on paired differences, two-sided p. All-zero differences
// return (t=0, p=1); nonzero differences with zero variance are an error.
TTestResult t_test_paired(const std::vector<double>& a, const std::vector<double>& b);

enum class EffectKind { independent, paired };

// independent: (mean a - mean b) / pooled SD; paired: mean diff / SD of diffs.
double cohens_d(const std::vector<double>& a, const std::vector<double>& b, EffectKind kind);

// Linear-interpolation percentile on sorted values, q in (0, 100).
double percentile(std::vector<double> values, double q);

// Student t CDF P(T <= t) with `df` degrees of freedom (regularized
// incomplete beta; relative error well under 1e-10).
double student_t_cdf(double t, double df);

} // namespace warrantscore::stats
