#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace expou {

// First four k-statistics with normalized cumulants and 95%-style CI
// half-widths. kurt is excess kurtosis throughout.
struct CumulantSet {
    double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
    double skew = 0, kurt = 0;
    struct {
        double k1 = 0, k2 = 0, skew = 0, kurt = 0;
    } half_width;
    std::size_t n = 0;
    const char* ci_method = "delta";  // "delta" or "bootstrap"
};

// Central sample moments through order 8 (mu is the sample mean), the inputs
// of the delta-method CI formulas.
struct MomentSummary {
    double mu = 0;
    double m2 = 0, m3 = 0, m4 = 0, m5 = 0, m6 = 0, m7 = 0, m8 = 0;
};

enum class Stat { Mean, K2, Skew, Kurt };

struct Histogram {
    std::vector<double> bin_edges;  // size n_bins + 1, strictly increasing
    std::vector<double> densities;  // size n_bins
    std::vector<std::size_t> counts;
    std::size_t total = 0;
};

struct BinningRule {
    int n_bins = 0;          // 0: Freedman-Diaconis
    int min_count = 10;      // sparse tail bins merged until satisfied
};

MomentSummary summarize_moments(std::span<const double> sample);

// Normal-asymptotic half-width at the given confidence; the skew/kurt
// variances come from the influence-function expansion (Gaussian limits 6/n
// and 24/n). Requires n >= 100.
double ci_half_width(Stat stat, const MomentSummary& mom, std::size_t n,
                     double confidence);

// k-statistics plus CIs. Sample size below 10^4 switches to a fixed-seed
// percentile bootstrap for the half-widths; at or above, the delta method.
CumulantSet estimate_cumulants(std::span<const double> sample,
                               double confidence = 0.95);

// Same point estimates with z-sigma delta-method half-widths at any n >= 100
// (no bootstrap). The calibration objective uses this with z = 1.
CumulantSet estimate_cumulants_delta(std::span<const double> sample,
                                     double z = 1.0);

Histogram build_histogram(std::span<const double> sample,
                          const BinningRule& rule = {});

// Inverse standard normal CDF (Acklam's rational approximation polished by a
// Halley step on erfc), used for CI quantiles.
double inv_normal_cdf(double p);

// Deterministic pairwise sum, the order-insensitive reduction used wherever
// accumulation must not depend on scheduling.
double pairwise_sum(std::span<const double> v);

}  // namespace expou
