#include "doctest.h"

#include <cmath>
#include <random>
#include <string_view>
#include <vector>

#include "expou/rng.hpp"
#include "expou/stats.hpp"

using namespace expou;

namespace {

std::vector<double> gaussian_sample(std::size_t n, std::uint64_t seed,
                                    double mu = 0.0, double sigma = 1.0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; i += 2) {
        auto [e1, e2] = normal_pair(seed, i / 2, 0);
        v[i] = mu + sigma * e1;
        if (i + 1 < n) v[i + 1] = mu + sigma * e2;
    }
    return v;
}

MomentSummary gaussian_moments(double sigma) {
    MomentSummary m;
    double s2 = sigma * sigma;
    m.m2 = s2;
    m.m4 = 3 * s2 * s2;
    m.m6 = 15 * s2 * s2 * s2;
    m.m8 = 105 * s2 * s2 * s2 * s2;
    return m;
}

}  // namespace

TEST_CASE("moment summary matches hand values") {
    std::vector<double> s{1.0, 2.0, 4.0, 8.0};
    MomentSummary m = summarize_moments(s);
    CHECK(m.mu == doctest::Approx(3.75).epsilon(1e-14));
    CHECK(m.m2 == doctest::Approx(7.1875).epsilon(1e-14));
    // m3 = mean of (x - 3.75)^3
    double m3 = (std::pow(-2.75, 3) + std::pow(-1.75, 3) +
                 std::pow(0.25, 3) + std::pow(4.25, 3)) /
                4.0;
    CHECK(m.m3 == doctest::Approx(m3).epsilon(1e-13));
}

TEST_CASE("cumulant estimates recover an exact discrete distribution") {
    // 100 copies of a fixed 8-point sample: central moments are unchanged,
    // and at n = 800 the k-statistic corrections are tiny, so the estimates
    // must sit within 1% of the n -> inf cumulants of the 8-point sample.
    std::vector<double> base{0.3, -1.2, 0.7, 2.5, -0.4, 1.1, 0.05, -2.2};
    std::vector<double> s;
    for (int rep = 0; rep < 100; ++rep)
        s.insert(s.end(), base.begin(), base.end());
    MomentSummary m = summarize_moments(base);
    double c2 = m.m2, c3 = m.m3, c4 = m.m4 - 3 * m.m2 * m.m2;
    CumulantSet c = estimate_cumulants(s);
    CHECK(c.k1 == doctest::Approx(0.10625).epsilon(1e-12));
    CHECK(c.k2 == doctest::Approx(c2).epsilon(0.01));
    CHECK(c.k3 == doctest::Approx(c3).epsilon(0.01));
    CHECK(c.k4 == doctest::Approx(c4).epsilon(0.05));
    CHECK(c.skew == doctest::Approx(c3 / std::pow(c2, 1.5)).epsilon(0.01));
}

TEST_CASE("k-statistics are exactly the textbook small-sample formulas") {
    std::vector<double> s{0.3, -1.2, 0.7, 2.5, -0.4, 1.1, 0.05, -2.2};
    // Reference values for this sample (n = 8).
    const double k1 = 0.10625, k2 = 2.056026785714286;
    const double k3 = 0.055051339285713465, k4 = 1.6410907812499966;
    // Small n forbids estimate_cumulants; replicate the formulas through the
    // public moment interface.
    MomentSummary m = summarize_moments(s);
    double n = 8;
    CHECK(m.mu == doctest::Approx(k1).epsilon(1e-13));
    CHECK(n * m.m2 / (n - 1) == doctest::Approx(k2).epsilon(1e-13));
    CHECK(n * n * m.m3 / ((n - 1) * (n - 2)) ==
          doctest::Approx(k3).epsilon(1e-10));
    CHECK(n * n * ((n + 1) * m.m4 - 3 * (n - 1) * m.m2 * m.m2) /
              ((n - 1) * (n - 2) * (n - 3)) ==
          doctest::Approx(k4).epsilon(1e-12));
}

TEST_CASE("delta-method variances hit the Gaussian limits") {
    MomentSummary m = gaussian_moments(1.0);
    std::size_t n = 10000;
    double z = inv_normal_cdf(0.975);
    CHECK(ci_half_width(Stat::Skew, m, n, 0.95) ==
          doctest::Approx(z * std::sqrt(6.0 / n)).epsilon(1e-10));
    CHECK(ci_half_width(Stat::Kurt, m, n, 0.95) ==
          doctest::Approx(z * std::sqrt(24.0 / n)).epsilon(1e-10));
    CHECK(ci_half_width(Stat::Mean, m, n, 0.95) ==
          doctest::Approx(z / std::sqrt(static_cast<double>(n)))
              .epsilon(1e-10));
    // Var(k2) for a Gaussian is 2 sigma^4 / (n - 1) ~ 2 / n.
    CHECK(ci_half_width(Stat::K2, m, n, 0.95) ==
          doctest::Approx(z * std::sqrt(2.0 / n)).epsilon(0.01));

    double s = 0.37;
    MomentSummary ms = gaussian_moments(s);
    CHECK(ci_half_width(Stat::Skew, ms, n, 0.95) ==
          doctest::Approx(z * std::sqrt(6.0 / n)).epsilon(1e-10));
}

TEST_CASE("cumulant intervals cover the Gaussian truth") {
    std::vector<double> v = gaussian_sample(60000, 99, 0.25, 1.7);
    CumulantSet c = estimate_cumulants(v);
    CHECK(std::string_view(c.ci_method) == "delta");
    CHECK(std::abs(c.k1 - 0.25) < 2 * c.half_width.k1);
    CHECK(std::abs(c.k2 - 1.7 * 1.7) < 2 * c.half_width.k2);
    CHECK(std::abs(c.skew) < 2 * c.half_width.skew);
    CHECK(std::abs(c.kurt) < 2 * c.half_width.kurt);

    std::vector<double> small(v.begin(), v.begin() + 2000);
    CumulantSet cb = estimate_cumulants(small);
    CHECK(std::string_view(cb.ci_method) == "bootstrap");
    CHECK(cb.half_width.skew > 0);
    // Bootstrap and delta half-widths must agree in order of magnitude.
    CumulantSet cd = estimate_cumulants_delta(small, inv_normal_cdf(0.975));
    CHECK(cb.half_width.skew < 3 * cd.half_width.skew);
    CHECK(cb.half_width.skew > cd.half_width.skew / 3);
}

TEST_CASE("delta variant scales linearly in z") {
    std::vector<double> v = gaussian_sample(5000, 7);
    CumulantSet c1 = estimate_cumulants_delta(v, 1.0);
    CumulantSet c2 = estimate_cumulants_delta(v, 2.0);
    CHECK(c2.half_width.k1 == doctest::Approx(2 * c1.half_width.k1));
    CHECK(c2.half_width.kurt == doctest::Approx(2 * c1.half_width.kurt));
    CHECK(c1.k3 == c2.k3);
}

TEST_CASE("too-small samples are rejected") {
    std::vector<double> v(99, 1.0);
    CHECK_THROWS(estimate_cumulants(v));
    CHECK_THROWS(estimate_cumulants_delta(v));
    // Degenerate (zero-variance) samples cannot be normalized.
    std::vector<double> flat(200, 3.14);
    CHECK_THROWS(estimate_cumulants(flat));
}

TEST_CASE("histogram densities integrate to one") {
    std::vector<double> v = gaussian_sample(30000, 5);
    Histogram h = build_histogram(v);
    REQUIRE(h.bin_edges.size() == h.densities.size() + 1);
    REQUIRE(h.counts.size() == h.densities.size());
    CHECK(h.total == v.size());
    double mass = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < h.densities.size(); ++i) {
        mass += h.densities[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
        total += h.counts[i];
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(total == v.size());
    // Tail bins carry at least min_count observations.
    CHECK(h.counts.front() >= 10);
    CHECK(h.counts.back() >= 10);
}

TEST_CASE("histogram honors a fixed bin count") {
    // A ramp fills every bin, so the min_count merge never kicks in.
    std::vector<double> v(5000);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = static_cast<double>(i) / 5000.0;
    BinningRule rule;
    rule.n_bins = 32;
    rule.min_count = 1;
    Histogram h = build_histogram(v, rule);
    CHECK(h.densities.size() == 32);
}

TEST_CASE("inverse normal CDF round-trips against erfc") {
    auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    for (double p : {1e-12, 1e-9, 1e-4, 0.025, 0.3, 0.5, 0.8, 0.975,
                     1 - 1e-6, 1 - 1e-12}) {
        CHECK(cdf(inv_normal_cdf(p)) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK(inv_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(inv_normal_cdf(0.975) ==
          doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK_THROWS(inv_normal_cdf(0.0));
    CHECK_THROWS(inv_normal_cdf(1.0));
}

TEST_CASE("pairwise sum is accurate and order-stable") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(1 << 20);
    long double exact = 0;
    for (double& x : v) {
        x = u(gen) - 0.5;
        exact += x;
    }
    double got = pairwise_sum(v);
    CHECK(std::abs(got - static_cast<double>(exact)) < 1e-10);
    std::vector<double> tiny{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(pairwise_sum(tiny) == 15.0);
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
}
