#pragma once

#include <complex>
#include <optional>

#include "expou/model.hpp"

namespace expou {

// Frequency-dependent auxiliary quantities of the linear model's Riccati
// system. d is the principal square root; its real part is strictly positive
// for every real phi, which keeps |g| < 1 and the log branch principal.
struct AuxVars {
    std::complex<double> d, b, g, h, n;
};

AuxVars aux_vars(double phi, const ModelParams& p);

// Characteristic function of the linear model's centered log return:
// f(phi) = exp(A + B z0 + C z0^2 + i phi x0). The exponent pieces are kept
// alongside the exponentiated value.
struct CFValue {
    double phi = 0;
    std::complex<double> A, B, C;
    std::complex<double> exponent;  // A + B z0 + C z0^2 + i phi x0
    std::complex<double> f;
};

// z0 defaults to the model's implied start y0 - gamma + 1. Requires k > 0;
// the k = 0 degenerate case is the plain Gaussian CF and is the caller's
// responsibility.
CFValue cf_linear(double phi, const ModelParams& p, const Horizon& h,
                  double x0 = 0.0, std::optional<double> z0 = std::nullopt);

// Closed forms versus their own ODE system, two independent routes:
// fd_residual   max |d/dT(closed form) - RHS| via central differences,
// ode_mismatch  max |closed form - RK4 integration| at the horizon.
struct RiccatiReport {
    double fd_residual = 0;
    double ode_mismatch = 0;
};

RiccatiReport riccati_residual_check(const ModelParams& p, const Horizon& h);

// Walks phi in [0, phi_max] and counts branch crossings of log(1 - g E).
// The shipped root arrangement is branch-safe by construction, so the count
// is zero; flip_root selects the mirrored (growing) arrangement, a
// deliberately broken variant that exercises the detector.
struct BranchScanReport {
    int discontinuities = 0;
    double max_imag_step = 0;  // largest principal-log jump between nodes
};

BranchScanReport branch_smoothness_scan(const ModelParams& p, const Horizon& h,
                                        double phi_max, int n_points,
                                        bool flip_root = false);

// Probability that the linear model's volatility factor is negative after
// delta_t, i.e. P(Z < 0) for the Gaussian Z. Zero at delta_t = 0.
double negative_vol_probability(const ModelParams& p, double delta_t);

// log10 of the same probability, stable far below the double underflow.
double negative_vol_log10(const ModelParams& p, double delta_t);

}  // namespace expou
