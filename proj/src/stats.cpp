#include "expou/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

#include "expou/rng.hpp"

namespace expou {

namespace {

constexpr std::size_t kPairwiseBase = 128;
constexpr std::size_t kBootstrapThreshold = 10000;
constexpr int kBootstrapReplicates = 400;
constexpr std::uint64_t kBootstrapSeed = 0x626f6f74u;  // fixed: CIs reproduce

double pairwise_block(const double* v, std::size_t n) {
    if (n <= kPairwiseBase) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_block(v, h) + pairwise_block(v + h, n - h);
}

// Pairwise-reduced sums of (x-mu)^2 .. (x-mu)^8 in one recursion.
struct PowerSums {
    std::array<double, 7> s{};  // orders 2..8
    PowerSums& operator+=(const PowerSums& o) {
        for (int i = 0; i < 7; ++i) s[i] += o.s[i];
        return *this;
    }
};

PowerSums power_block(const double* v, std::size_t n, double mu) {
    PowerSums out;
    if (n <= kPairwiseBase) {
        for (std::size_t i = 0; i < n; ++i) {
            double d = v[i] - mu;
            double d2 = d * d;
            double d3 = d2 * d;
            double d4 = d2 * d2;
            out.s[0] += d2;
            out.s[1] += d3;
            out.s[2] += d4;
            out.s[3] += d4 * d;
            out.s[4] += d4 * d2;
            out.s[5] += d4 * d3;
            out.s[6] += d4 * d4;
        }
        return out;
    }
    std::size_t h = n / 2;
    out = power_block(v, h, mu);
    out += power_block(v + h, n - h, mu);
    return out;
}

struct KStats {
    double k1, k2, k3, k4, skew, kurt;
};

KStats kstats_from_moments(const MomentSummary& mom, std::size_t n) {
    double nn = static_cast<double>(n);
    KStats k{};
    k.k1 = mom.mu;
    k.k2 = nn * mom.m2 / (nn - 1);
    k.k3 = nn * nn * mom.m3 / ((nn - 1) * (nn - 2));
    k.k4 = nn * nn *
           ((nn + 1) * mom.m4 - 3 * (nn - 1) * mom.m2 * mom.m2) /
           ((nn - 1) * (nn - 2) * (nn - 3));
    // A flat sample can leave m2 at rounding-noise level instead of exactly
    // zero: the pairwise mean is off by up to ~eps log2(n) |mu|, and that
    // offset squared lands in m2. Treat anything at that scale as degenerate.
    double eps = std::numeric_limits<double>::epsilon();
    double noise = 8 * eps * std::max(1.0, std::abs(mom.mu)) *
                   std::log2(nn + 2);
    if (k.k2 <= noise * noise)
        throw std::invalid_argument(
            "estimate_cumulants: degenerate sample (zero variance)");
    k.skew = k.k3 / (k.k2 * std::sqrt(k.k2));
    k.kurt = k.k4 / (k.k2 * k.k2);
    return k;
}

double stat_variance(Stat stat, const MomentSummary& m, std::size_t n) {
    double nn = static_cast<double>(n);
    double var = 0;
    switch (stat) {
        case Stat::Mean:
            var = m.m2 / nn;
            break;
        case Stat::K2:
            var = (m.m4 - m.m2 * m.m2 * (nn - 3) / (nn - 1)) / nn;
            break;
        case Stat::Skew: {
            // Influence function of g1 = m3/m2^{3/2}:
            //   IF = [d^3 - m3 - 3 m2 d]/m2^{3/2}
            //        - (3/2)(m3/m2^{5/2})[d^2 - m2],  d = x - mu,
            // and Var = E[IF^2]/n expanded in central moments.
            double ea2 = m.m6 - m.m3 * m.m3 - 6 * m.m2 * m.m4 +
                         9 * m.m2 * m.m2 * m.m2;
            double eab = m.m5 - 4 * m.m2 * m.m3;
            double eb2 = m.m4 - m.m2 * m.m2;
            double m2_3 = m.m2 * m.m2 * m.m2;
            var = (ea2 / m2_3 - 3 * m.m3 * eab / (m2_3 * m.m2) +
                   2.25 * m.m3 * m.m3 * eb2 / (m2_3 * m.m2 * m.m2)) /
                  nn;
            break;
        }
        case Stat::Kurt: {
            // Same treatment for g2 = m4/m2^2 - 3 with
            //   IF = [d^4 - m4 - 4 m3 d]/m2^2 - 2(m4/m2^3)[d^2 - m2].
            double ec2 = m.m8 - m.m4 * m.m4 - 8 * m.m3 * m.m5 +
                         16 * m.m3 * m.m3 * m.m2;
            double ecb = m.m6 - m.m2 * m.m4 - 4 * m.m3 * m.m3;
            double eb2 = m.m4 - m.m2 * m.m2;
            double m2_4 = m.m2 * m.m2 * m.m2 * m.m2;
            var = (ec2 / m2_4 - 4 * m.m4 * ecb / (m2_4 * m.m2) +
                   4 * m.m4 * m.m4 * eb2 / (m2_4 * m.m2 * m.m2)) /
                  nn;
            break;
        }
    }
    return var > 0 ? var : 0;
}

// Percentile bootstrap for all four statistics at once; indices come from a
// dedicated Philox stream so repeated runs agree bit for bit.
struct BootstrapWidths {
    double k1, k2, skew, kurt;
};

BootstrapWidths bootstrap_half_widths(std::span<const double> sample,
                                      double confidence) {
    const std::size_t n = sample.size();
    std::vector<double> scratch(n);
    std::array<std::vector<double>, 4> reps;
    for (auto& r : reps) r.reserve(kBootstrapReplicates);

    for (int b = 0; b < kBootstrapReplicates; ++b) {
        std::size_t i = 0;
        std::uint64_t cell = 0;
        while (i < n) {
            StreamCell c = stream_cell(kBootstrapSeed,
                                       static_cast<std::uint64_t>(b), cell++);
            for (std::uint64_t w : {c.u64a, c.u64b}) {
                if (i >= n) break;
                double u = u64_to_uniform(w);
                scratch[i++] = sample[static_cast<std::size_t>(u * n)];
            }
        }
        MomentSummary mom = summarize_moments(scratch);
        KStats k = kstats_from_moments(mom, n);
        reps[0].push_back(k.k1);
        reps[1].push_back(k.k2);
        reps[2].push_back(k.skew);
        reps[3].push_back(k.kurt);
    }

    double lo_q = 0.5 * (1 - confidence), hi_q = 0.5 * (1 + confidence);
    auto half = [&](std::vector<double>& r) {
        std::sort(r.begin(), r.end());
        auto at = [&](double q) {
            double pos = q * (r.size() - 1);
            std::size_t i0 = static_cast<std::size_t>(pos);
            std::size_t i1 = std::min(i0 + 1, r.size() - 1);
            double f = pos - static_cast<double>(i0);
            return r[i0] * (1 - f) + r[i1] * f;
        };
        return 0.5 * (at(hi_q) - at(lo_q));
    };
    return {half(reps[0]), half(reps[1]), half(reps[2]), half(reps[3])};
}

}  // namespace

double pairwise_sum(std::span<const double> v) {
    if (v.empty()) return 0;
    return pairwise_block(v.data(), v.size());
}

MomentSummary summarize_moments(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n == 0) throw std::invalid_argument("summarize_moments: empty sample");
    MomentSummary mom;
    mom.mu = pairwise_block(sample.data(), n) / static_cast<double>(n);
    PowerSums p = power_block(sample.data(), n, mom.mu);
    double inv = 1.0 / static_cast<double>(n);
    mom.m2 = p.s[0] * inv;
    mom.m3 = p.s[1] * inv;
    mom.m4 = p.s[2] * inv;
    mom.m5 = p.s[3] * inv;
    mom.m6 = p.s[4] * inv;
    mom.m7 = p.s[5] * inv;
    mom.m8 = p.s[6] * inv;
    return mom;
}

double ci_half_width(Stat stat, const MomentSummary& mom, std::size_t n,
                     double confidence) {
    if (n < 100)
        throw std::invalid_argument(
            "ci_half_width: need n >= 100 for the normal asymptotics");
    if (!(confidence > 0 && confidence < 1))
        throw std::invalid_argument("ci_half_width: confidence must be in (0,1)");
    double z = inv_normal_cdf(0.5 * (1 + confidence));
    return z * std::sqrt(stat_variance(stat, mom, n));
}

CumulantSet estimate_cumulants(std::span<const double> sample,
                               double confidence) {
    const std::size_t n = sample.size();
    if (n < 100)
        throw std::invalid_argument(
            "estimate_cumulants: need at least 100 observations");
    if (!(confidence > 0 && confidence < 1))
        throw std::invalid_argument(
            "estimate_cumulants: confidence must be in (0,1)");

    MomentSummary mom = summarize_moments(sample);
    KStats k = kstats_from_moments(mom, n);

    CumulantSet out;
    out.k1 = k.k1;
    out.k2 = k.k2;
    out.k3 = k.k3;
    out.k4 = k.k4;
    out.skew = k.skew;
    out.kurt = k.kurt;
    out.n = n;

    if (n < kBootstrapThreshold) {
        BootstrapWidths w = bootstrap_half_widths(sample, confidence);
        out.half_width.k1 = w.k1;
        out.half_width.k2 = w.k2;
        out.half_width.skew = w.skew;
        out.half_width.kurt = w.kurt;
        out.ci_method = "bootstrap";
    } else {
        out.half_width.k1 = ci_half_width(Stat::Mean, mom, n, confidence);
        out.half_width.k2 = ci_half_width(Stat::K2, mom, n, confidence);
        out.half_width.skew = ci_half_width(Stat::Skew, mom, n, confidence);
        out.half_width.kurt = ci_half_width(Stat::Kurt, mom, n, confidence);
        out.ci_method = "delta";
    }
    return out;
}

CumulantSet estimate_cumulants_delta(std::span<const double> sample,
                                     double z) {
    const std::size_t n = sample.size();
    if (n < 100)
        throw std::invalid_argument(
            "estimate_cumulants_delta: need at least 100 observations");
    MomentSummary mom = summarize_moments(sample);
    KStats k = kstats_from_moments(mom, n);

    CumulantSet out;
    out.k1 = k.k1;
    out.k2 = k.k2;
    out.k3 = k.k3;
    out.k4 = k.k4;
    out.skew = k.skew;
    out.kurt = k.kurt;
    out.n = n;
    out.half_width.k1 = z * std::sqrt(stat_variance(Stat::Mean, mom, n));
    out.half_width.k2 = z * std::sqrt(stat_variance(Stat::K2, mom, n));
    out.half_width.skew = z * std::sqrt(stat_variance(Stat::Skew, mom, n));
    out.half_width.kurt = z * std::sqrt(stat_variance(Stat::Kurt, mom, n));
    out.ci_method = "delta";
    return out;
}

Histogram build_histogram(std::span<const double> sample,
                          const BinningRule& rule) {
    const std::size_t n = sample.size();
    if (n < 2) throw std::invalid_argument("build_histogram: need >= 2 points");
    if (rule.min_count < 1)
        throw std::invalid_argument("build_histogram: min_count must be >= 1");

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    double lo = sorted.front(), hi = sorted.back();
    if (!(std::isfinite(lo) && std::isfinite(hi)))
        throw std::invalid_argument("build_histogram: non-finite sample");
    if (hi == lo) {
        Histogram h;
        h.bin_edges = {lo - 0.5, hi + 0.5};
        h.counts = {n};
        h.densities = {1.0};
        h.total = n;
        return h;
    }

    int n_bins = rule.n_bins;
    if (n_bins <= 0) {
        auto quantile = [&](double q) {
            double pos = q * (n - 1);
            std::size_t i0 = static_cast<std::size_t>(pos);
            std::size_t i1 = std::min(i0 + 1, n - 1);
            double f = pos - static_cast<double>(i0);
            return sorted[i0] * (1 - f) + sorted[i1] * f;
        };
        double iqr = quantile(0.75) - quantile(0.25);
        double width = 2 * iqr / std::cbrt(static_cast<double>(n));
        if (width <= 0) {
            // Degenerate IQR: fall back to Scott's normal-reference width.
            MomentSummary mom = summarize_moments(sample);
            width = 3.49 * std::sqrt(mom.m2) /
                    std::cbrt(static_cast<double>(n));
        }
        if (width <= 0) width = hi - lo;
        n_bins = static_cast<int>(std::ceil((hi - lo) / width));
        n_bins = std::clamp(n_bins, 1, 1 << 16);
    }

    Histogram h;
    h.total = n;
    h.bin_edges.resize(n_bins + 1);
    double w = (hi - lo) / n_bins;
    for (int i = 0; i <= n_bins; ++i) h.bin_edges[i] = lo + i * w;
    h.bin_edges.back() = hi;
    h.counts.assign(n_bins, 0);
    for (double x : sample) {
        auto idx = static_cast<std::size_t>((x - lo) / w);
        if (idx >= static_cast<std::size_t>(n_bins)) idx = n_bins - 1;
        ++h.counts[idx];
    }

    // Fold sparse tail bins into their inward neighbor until both end bins
    // meet the minimum count (interior bins are left alone).
    auto min_count = static_cast<std::size_t>(rule.min_count);
    while (h.counts.size() > 1 && h.counts.front() < min_count) {
        h.counts[1] += h.counts[0];
        h.counts.erase(h.counts.begin());
        h.bin_edges.erase(h.bin_edges.begin() + 1);
    }
    while (h.counts.size() > 1 && h.counts.back() < min_count) {
        h.counts[h.counts.size() - 2] += h.counts.back();
        h.counts.pop_back();
        h.bin_edges.erase(h.bin_edges.end() - 2);
    }

    h.densities.resize(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        double bw = h.bin_edges[i + 1] - h.bin_edges[i];
        h.densities[i] =
            static_cast<double>(h.counts[i]) / (static_cast<double>(n) * bw);
    }
    return h;
}

double inv_normal_cdf(double p) {
    if (!(p > 0 && p < 1))
        throw std::invalid_argument("inv_normal_cdf: p must be in (0,1)");

    // Acklam's rational approximation, then one Halley step against erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= 1 - p_low) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
             a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
              c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }

    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2 * 3.14159265358979323846) *
               std::exp(0.5 * x * x);
    x = x - u / (1 + 0.5 * x * u);
    return x;
}

}  // namespace expou
