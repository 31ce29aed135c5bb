#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "warrantscore/errors.hpp"
#include "warrantscore/stats.hpp"

using namespace warrantscore;
using namespace warrantscore::stats;

TEST_CASE("aggregate max") {
    CHECK(aggregate_max({1, 3, 2}) == 3);
    CHECK(aggregate_max({2}) == 2);
    CHECK(aggregate_max({5, 5, 1}) == 5);
    CHECK_THROWS_AS(aggregate_max({}), DataError);
}

TEST_CASE("spearman on monotone data") {
    const std::vector<double> xs = {1, 2, 5, 9, 12};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(x * x * x + 2); // strictly increasing transform
    CHECK(spearman(xs, ys) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> reversed(ys.rbegin(), ys.rend());
    CHECK(spearman(xs, reversed) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("spearman tie handling uses average ranks") {
    // ranks: xs -> 1, 2.5, 2.5, 4 ; ys -> 1, 3, 2, 4 ; pearson = 3/sqrt(10)
    CHECK(spearman({1, 2, 2, 4}, {1, 3, 2, 4}) ==
          doctest::Approx(0.948683298050514).epsilon(1e-12));
}

TEST_CASE("spearman error cases") {
    CHECK_THROWS_AS(spearman({1, 2}, {1, 2, 3}), DataError);
    CHECK_THROWS_AS(spearman({1, 2}, {1, 2}), DataError);
    CHECK_THROWS_WITH_AS(spearman({2, 2, 2}, {1, 2, 3}), "undefined correlation", DataError);
}

TEST_CASE("spearman is invariant under strictly increasing transforms") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + rng() % 6;
        std::vector<double> xs(n);
        std::vector<double> ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = unit(rng);
            ys[i] = unit(rng);
        }
        const double base = spearman(xs, ys);
        std::vector<double> scaled(n);
        std::vector<double> warped(n);
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = 3.5 * xs[i] + 11.0;          // affine
            warped[i] = std::exp(2.0 * ys[i]);       // nonlinear monotone
        }
        CHECK(spearman(scaled, ys) == doctest::Approx(base).epsilon(1e-12));
        CHECK(spearman(xs, warped) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("spearman matches the exact untied formula for n <= 8") {
    // untied inputs: rho = 1 - 6 sum d^2 / (n (n^2 - 1)), exact in integers
    std::mt19937 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> xs(n);
        std::vector<double> ys(n);
        long d2 = 0;
        for (int i = 0; i < n; ++i) {
            xs[i] = i + 1;
            ys[i] = perm[i];
            const long d = (i + 1) - perm[i];
            d2 += d * d;
        }
        const double exact =
            1.0 - 6.0 * static_cast<double>(d2) / (static_cast<double>(n) * (n * n - 1));
        CHECK(spearman(xs, ys) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("independent one-sided t-test") {
    const std::vector<double> same = {1, 2, 3, 4};
    const auto symmetric = t_test_independent_one_sided(same, same);
    CHECK(symmetric.t == doctest::Approx(0.0));
    CHECK(symmetric.p == doctest::Approx(0.5));

    std::vector<double> shifted;
    for (double x : same) shifted.push_back(x + 50.0); // far beyond group spread
    CHECK(t_test_independent_one_sided(shifted, same).p < 1e-6);

    // frozen reference values (independent computation, tol 1e-6)
    const std::vector<double> a = {12.1, 14.3, 11.8, 13.5, 12.9};
    const std::vector<double> b = {10.2, 11.1, 10.8, 12.0, 11.4, 10.9};
    const auto r = t_test_independent_one_sided(a, b);
    CHECK(r.t == doctest::Approx(3.74813479900759).epsilon(1e-6));
    CHECK(r.p == doctest::Approx(0.00228389989475476).epsilon(1e-6));

    // p(a > b) + p(b > a) = 1 for distinct means
    const auto forward = t_test_independent_one_sided(a, b);
    const auto backward = t_test_independent_one_sided(b, a);
    CHECK(forward.p + backward.p == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(t_test_independent_one_sided({1, 1}, {1, 1}), DataError);
    CHECK_THROWS_AS(t_test_independent_one_sided({1}, {1, 2}), DataError);
}

TEST_CASE("paired t-test") {
    const std::vector<double> a = {3.1, 2.8, 3.5, 3.0, 2.9, 3.3};
    const auto equal = t_test_paired(a, a);
    CHECK(equal.t == 0.0);
    CHECK(equal.p == 1.0);

    std::vector<double> shifted;
    for (double x : a) shifted.push_back(x + 2.0); // constant nonzero differences
    CHECK_THROWS_WITH_AS(t_test_paired(shifted, a).t, "zero variance of nonzero differences",
                         DataError);

    const std::vector<double> b = {2.7, 2.9, 3.1, 2.6, 2.8, 3.0};
    const auto r = t_test_paired(a, b);
    CHECK(r.t == doctest::Approx(2.95312211609309).epsilon(1e-6));
    CHECK(r.p == doctest::Approx(0.0317704574708543).epsilon(1e-6));

    CHECK_THROWS_AS(t_test_paired({1, 2, 3}, {1, 2}), DataError);
}

TEST_CASE("cohen's d") {
    const std::vector<double> a = {12.1, 14.3, 11.8, 13.5, 12.9};
    const std::vector<double> b = {10.2, 11.1, 10.8, 12.0, 11.4, 10.9};
    CHECK(cohens_d(a, a, EffectKind::independent) == doctest::Approx(0.0));
    CHECK(cohens_d(a, b, EffectKind::independent) ==
          doctest::Approx(2.26960833028409).epsilon(1e-9));
    CHECK(cohens_d(a, b, EffectKind::independent) ==
          doctest::Approx(-cohens_d(b, a, EffectKind::independent)).epsilon(1e-12));

    const std::vector<double> ap = {3.1, 2.8, 3.5, 3.0, 2.9, 3.3};
    const std::vector<double> bp = {2.7, 2.9, 3.1, 2.6, 2.8, 3.0};
    CHECK(cohens_d(ap, bp, EffectKind::paired) ==
          doctest::Approx(1.20560705542603).epsilon(1e-9));
    CHECK(cohens_d(ap, ap, EffectKind::paired) == 0.0);
    CHECK_THROWS_AS(cohens_d({1, 1}, {1, 1}, EffectKind::independent), DataError);
}

TEST_CASE("percentile interpolation") {
    CHECK(percentile({1, 2, 3}, 50) == doctest::Approx(2.0));
    CHECK(percentile({1, 3}, 50) == doctest::Approx(2.0));
    CHECK(percentile({5}, 30) == doctest::Approx(5.0));
    CHECK(percentile({5}, 99) == doctest::Approx(5.0));
    CHECK(percentile({1, 2, 3, 4}, 25) == doctest::Approx(1.75));
    CHECK_THROWS_AS(percentile({}, 50), DataError);
    CHECK_THROWS_AS(percentile({1.0}, 0), DataError);
}

TEST_CASE("percentile 50 equals the textbook median for odd lengths") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> unit(-5.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + 2 * (rng() % 10);
        std::vector<double> values(n);
        for (double& v : values) v = unit(rng);
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        CHECK(percentile(values, 50) == doctest::Approx(sorted[n / 2]).epsilon(1e-15));
    }
}

TEST_CASE("student t cdf reference points") {
    CHECK(student_t_cdf(0.0, 7.0) == doctest::Approx(0.5).epsilon(1e-12));
    // symmetric tails
    CHECK(student_t_cdf(1.3, 9.0) + student_t_cdf(-1.3, 9.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}
