#pragma once

#include <complex>

#include "expou/model.hpp"

namespace expou {

// Closed-form cumulants of the centered log-return X over a horizon, valid to
// first order in the volatility-of-volatility expansion.
struct TheoreticalCumulants {
    double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
    double skew = 0, kurt = 0;
    bool degenerate = false;  // zero-span horizon: X is a point mass at 0
};

TheoreticalCumulants cumulants_closed_form(const ModelParams& p,
                                           const Horizon& h);

// The three pieces of the first-order characteristic-function exponent for X,
// as functions of the scaled frequency omega1 = omega * m / k and the scaled
// time tau = k^2 (t - t0). The marginal CF is exp(-C).
struct ExponentTerms {
    std::complex<double> A, B, C;
};

ExponentTerms exponent_terms(double omega1, const ModelParams& p,
                             const Horizon& h);

// Convenience accessor for the C term alone. Requires k > 0.
std::complex<double> exponent_C(double omega1, const ModelParams& p,
                                const Horizon& h);

// Edgeworth series density built from the first four cumulants. Values may
// be negative where the expansion breaks down; nothing is clipped.
double edgeworth_density(double x, const TheoreticalCumulants& cum);

// Scans [k1 - n_sigma*sqrt(k2), k1 + n_sigma*sqrt(k2)] for negative density.
// The default covers the central three sigma, the region the truncated
// series is meant to describe; any fourth-order series dips negative
// somewhere in the far tails even for mild cumulants.
bool edgeworth_has_negative(const TheoreticalCumulants& cum,
                            double n_sigma = 3.0, int n_points = 4001);

// Max absolute residual of the exponent-term ODE system, checked by central
// finite differences of the closed forms over a frequency/time grid.
double limit1_ode_check(const ModelParams& p, const Horizon& h);

}  // namespace expou
