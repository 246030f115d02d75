#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "expou/model.hpp"

namespace expou {

// Daily close series. dt is the average spacing in years, derived from the
// date span; at least 500 observations are required by the pipeline.
struct PriceSeries {
    std::vector<std::string> dates;
    std::vector<double> closes;
    double dt = 0;

    std::size_t n() const { return closes.size(); }
};

// Reads a two-column CSV (date,close). Dates are ISO YYYY-MM-DD or plain
// year fractions; header lines and comments are skipped.
PriceSeries load_price_csv(const std::string& path);

// Wraps a raw close vector with a fixed spacing (synthetic data path).
PriceSeries series_from_closes(std::vector<double> closes, double dt);

struct MuEstimate {
    double mu = 0;
    double ci_half_width = 0;  // 1.96 standard errors
};

MuEstimate estimate_mu(const PriceSeries& series);

// Centered rolling-RMS volatility proxy of the demeaned log returns,
// per step (not annualized). window must be odd, >= 5, and no longer than
// the return count; the output has n_returns - window + 1 entries.
std::vector<double> extract_vol_proxy(const PriceSeries& series, int window);

struct FitRange {
    double lo = 0, hi = 0;
};

struct LognormalFit {
    double log_sigma0 = 0, s = 0;
    double log_sigma0_se = 0, s_se = 0;
    double sse = 0;
    int n_bins_used = 0;
    FitRange range;  // the range actually fitted
};

// Least-squares fit of a lognormal density to the proxy histogram, over
// bins whose centers fall in fit_range (default: central 90% quantile band).
LognormalFit fit_lognormal(const std::vector<double>& proxy,
                           std::optional<FitRange> fit_range = std::nullopt);

// Per-horizon skewness/excess-kurtosis curves measured from the series.
// Horizons are in steps (days). Non-overlapping returns are used when at
// least 200 fit; otherwise overlapping returns with error bars inflated by
// sqrt(2 i / 3) to account for their serial dependence.
struct DataCumulants {
    std::vector<int> horizons;
    std::vector<double> skew, skew_err;  // 1 sigma
    std::vector<double> kurt, kurt_err;
    std::vector<std::uint8_t> overlapping;
};

DataCumulants data_cumulant_curves(const PriceSeries& series,
                                   int max_horizon = 100);

struct FixedInputs {
    double m_bar = 0, beta = 0, dt = 0;
};

struct ChiSqConfig {
    std::size_t n_paths = 10000;
    std::uint64_t seed = 20177;
    int substeps = 0;  // 0: ceil(alpha * dt / 0.01), else fixed (CRN runs)
};

// Chi-squared distance between the measured skew/kurtosis curves and a
// common-random-numbers Monte Carlo at (alpha, rho), both statistics at
// every horizon, 1-sigma errors of both sides in the denominators. The
// simulation starts from the stationary volatility law.
double chi2_objective(double alpha, double rho, const FixedInputs& fixed,
                      const DataCumulants& data, const ChiSqConfig& mc);

struct OptBounds {
    double alpha_lo = 5, alpha_hi = 120;
    double rho_lo = -0.97, rho_hi = 0.97;
};

struct OptStart {
    double alpha = 25, rho = -0.4;
};

struct AlphaRhoResult {
    double alpha = 0, rho = 0, chi2 = 0;
    int n_evals = 0;
    bool converged = false;
};

// Powell search in the transformed coordinates (ln alpha, atanh rho) with a
// quadratic penalty outside the bounds box.
AlphaRhoResult optimize_alpha_rho(const FixedInputs& fixed,
                                  const DataCumulants& data,
                                  const ChiSqConfig& mc,
                                  const OptBounds& bounds = {},
                                  const OptStart& start = {});

struct CalibrationConfig {
    int window = 21;
    int max_horizon = 100;
    std::optional<FitRange> fit_range;
    ChiSqConfig mc;
    OptBounds bounds;
    OptStart start;
};

struct CalibrationResult {
    double mu = 0, m_bar = 0, beta = 0, alpha = 0, rho = 0;
    double y0 = 0, gamma = 0;  // pinned by the pipeline

    struct Diagnostics {
        double dt = 0;
        double mu_ci = 0;
        LognormalFit vol_fit;
        double chi2 = 0;
        int n_horizons = 0;
        int n_evals = 0;
        int substeps = 0;
        bool converged = false;
    } diagnostics;
};

CalibrationResult calibrate(const PriceSeries& series,
                            const CalibrationConfig& cfg = {});

}  // namespace expou
