#include "warrantscore/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "warrantscore/errors.hpp"

namespace warrantscore::stats {

int aggregate_max(const std::vector<int>& scores) {
    if (scores.empty()) throw DataError("cannot aggregate an empty score list");
    return *std::max_element(scores.begin(), scores.end());
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // Tie block [i, j] shares the mean of its 1-based ranks.
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

namespace {

double mean(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Sum of squared deviations from the mean.
double ss(const std::vector<double>& xs, double m) {
    double out = 0.0;
    for (double x : xs) out += (x - m) * (x - m);
    return out;
}

bool is_constant(const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); });
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double mx = mean(xs);
    const double my = mean(ys);
    double cov = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) cov += (xs[i] - mx) * (ys[i] - my);
    const double vx = ss(xs, mx);
    const double vy = ss(ys, my);
    if (vx == 0.0 || vy == 0.0) throw DataError("undefined correlation");
    return cov / std::sqrt(vx * vy);
}

} // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw DataError("length mismatch");
    if (xs.size() < 3) throw DataError("need at least 3 observations");
    if (is_constant(xs) || is_constant(ys)) throw DataError("undefined correlation");
    return pearson(average_ranks(xs), average_ranks(ys));
}

double student_t_cdf(double t, double df) {
    if (df <= 0.0) throw DataError("degrees of freedom must be positive");
    const boost::math::students_t dist(df);
    return boost::math::cdf(dist, t);
}

TTestResult t_test_independent_one_sided(const std::vector<double>& a,
                                         const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw DataError("each group needs at least 2 values");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a);
    const double mb = mean(b);
    const double df = na + nb - 2.0;
    const double pooled_var = (ss(a, ma) + ss(b, mb)) / df;
    if (pooled_var == 0.0) throw DataError("zero pooled variance");
    const double se = std::sqrt(pooled_var * (1.0 / na + 1.0 / nb));
    TTestResult result;
    result.t = (ma - mb) / se;
    result.p = 1.0 - student_t_cdf(result.t, df); // H1: mean(a) > mean(b)
    return result;
}

TTestResult t_test_paired(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DataError("paired test needs equal lengths");
    if (a.size() < 2) throw DataError("need at least 2 pairs");
    std::vector<double> diffs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];
    const double md = mean(diffs);
    const double var = ss(diffs, md) / (static_cast<double>(diffs.size()) - 1.0);
    if (var == 0.0) {
        // Exact equality is a defined outcome; a constant nonzero shift is not.
        if (md == 0.0) return {0.0, 1.0};
        throw DataError("zero variance of nonzero differences");
    }
    const double se = std::sqrt(var / static_cast<double>(diffs.size()));
    TTestResult result;
    result.t = md / se;
    const double df = static_cast<double>(diffs.size()) - 1.0;
    result.p = 2.0 * (1.0 - student_t_cdf(std::fabs(result.t), df));
    return result;
}

double cohens_d(const std::vector<double>& a, const std::vector<double>& b, EffectKind kind) {
    if (kind == EffectKind::independent) {
        if (a.size() < 2 || b.size() < 2) throw DataError("each group needs at least 2 values");
        const double ma = mean(a);
        const double mb = mean(b);
        const double df = static_cast<double>(a.size() + b.size()) - 2.0;
        const double pooled_sd = std::sqrt((ss(a, ma) + ss(b, mb)) / df);
        if (pooled_sd == 0.0) throw DataError("zero pooled standard deviation");
        return (ma - mb) / pooled_sd;
    }
    if (a.size() != b.size()) throw DataError("paired effect needs equal lengths");
    if (a.size() < 2) throw DataError("need at least 2 pairs");
    std::vector<double> diffs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];
    const double md = mean(diffs);
    const double sd = std::sqrt(ss(diffs, md) / (static_cast<double>(diffs.size()) - 1.0));
    if (sd == 0.0) {
        if (md == 0.0) return 0.0;
        throw DataError("zero standard deviation of nonzero differences");
    }
    return md / sd;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw DataError("percentile of an empty list");
    if (q <= 0.0 || q >= 100.0) throw DataError("percentile must be in (0, 100)");
    std::sort(values.begin(), values.end());
    const double pos = q / 100.0 * (static_cast<double>(values.size()) - 1.0);
    const auto lower = static_cast<std::size_t>(std::floor(pos));
    const auto upper = static_cast<std::size_t>(std::ceil(pos));
    if (lower == upper) return values[lower];
    const double frac = pos - static_cast<double>(lower);
    return values[lower] * (1.0 - frac) + values[upper] * frac;
}

} // namespace warrantscore::stats
