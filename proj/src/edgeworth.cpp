#include "expou/edgeworth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expou {

namespace {

constexpr double kPi = 3.14159265358979323846;

using cplx = std::complex<double>;

struct ExponentInputs {
    double beta, rho, lam, alpha, gamma, k, y0, tau;
};

ExponentInputs exponent_inputs(const ModelParams& p, const Horizon& h) {
    if (p.k <= 0)
        throw std::invalid_argument(
            "exponent_terms: k must be positive (the k=0 limit is the plain "
            "Gaussian and has no lambda scaling)");
    return {p.beta, p.rho,  p.k / p.m, p.alpha,
            p.gamma, p.k,   p.y0,      p.k * p.k * h.span()};
}

ExponentTerms terms_at(const ExponentInputs& in, double omega1, double tau) {
    const cplx i(0, 1);
    cplx th = 1.0 / (2 * in.beta) - i * in.rho * omega1;
    cplx E = std::exp(-th * tau);
    cplx E2 = E * E;
    double w2 = omega1 * omega1;

    ExponentTerms t;
    t.A = in.lam * in.lam / (4.0 * th) * (1.0 - E2);
    t.B = in.lam * (-i * in.y0 * E + i * w2 / (2.0 * th * th) * (1.0 - E) * (1.0 - E) +
                    (in.rho * omega1 - i * in.alpha * in.gamma / (in.k * in.k)) /
                        th * (1.0 - E));
    t.C = i * omega1 / (2.0 * in.lam) * tau + 0.5 * w2 * tau +
          i * w2 *
              (-i * in.y0 * (1.0 - E) / th +
               i * w2 / (2.0 * th * th) *
                   (tau - 2.0 * (1.0 - E) / th + (1.0 - E2) / (2.0 * th)) +
               (in.rho * omega1 - i * in.gamma / (2.0 * in.beta)) / th *
                   (tau - (1.0 - E) / th));
    return t;
}

}  // namespace

TheoreticalCumulants cumulants_closed_form(const ModelParams& p,
                                           const Horizon& h) {
    TheoreticalCumulants c;
    double z = h.zeta;
    if (z == 0) {
        c.degenerate = true;
        return c;
    }
    double ez = std::exp(-z);
    double m2 = p.m * p.m;
    double a = p.alpha;

    c.k1 = -m2 / (2 * a) * z;
    c.k2 = m2 / a * ((1 + 2 * p.gamma) * z + 2 * (p.y0 - p.gamma) * (1 - ez));
    c.k3 = 6 * p.rho * m2 * p.m * p.k / (a * a) *
           (z * (1 + p.gamma) + (p.y0 - (1 + 2 * p.gamma)) * (1 - ez) -
            (p.y0 - p.gamma) * z * ez);
    c.k4 = 6 * m2 * m2 * p.k * p.k / (a * a * a) *
           (2 * z + (1 - std::exp(-2 * z)) - 4 * (1 - ez) +
            4 * p.rho * p.rho * (z + z * ez - 2 * (1 - ez)) -
            4 * p.rho * p.rho * p.y0 *
                (z * ez - (1 - ez) + 0.5 * z * z * ez) +
            4 * p.rho * p.rho * p.gamma *
                (z + 2 * z * ez - 3 * (1 - ez) + 0.5 * z * z * ez));

    if (c.k2 <= 0)
        throw std::invalid_argument(
            "cumulants_closed_form: nonpositive variance (expansion invalid "
            "for these parameters)");
    c.skew = c.k3 / (c.k2 * std::sqrt(c.k2));
    c.kurt = c.k4 / (c.k2 * c.k2);
    return c;
}

ExponentTerms exponent_terms(double omega1, const ModelParams& p,
                             const Horizon& h) {
    ExponentInputs in = exponent_inputs(p, h);
    return terms_at(in, omega1, in.tau);
}

std::complex<double> exponent_C(double omega1, const ModelParams& p,
                                const Horizon& h) {
    return exponent_terms(omega1, p, h).C;
}

double edgeworth_density(double x, const TheoreticalCumulants& cum) {
    if (cum.degenerate)
        throw std::invalid_argument(
            "edgeworth_density: degenerate cumulants (zero-span horizon)");
    double s = std::sqrt(cum.k2);
    double z = (x - cum.k1) / s;
    double gauss = std::exp(-0.5 * z * z) / (s * std::sqrt(2 * kPi));
    double z2 = z * z;
    double he3 = z * (z2 - 3);
    double he4 = z2 * (z2 - 6) + 3;
    return gauss * (1 + cum.skew / 6 * he3 + cum.kurt / 24 * he4);
}

bool edgeworth_has_negative(const TheoreticalCumulants& cum, double n_sigma,
                            int n_points) {
    double s = std::sqrt(cum.k2);
    for (int i = 0; i < n_points; ++i) {
        double x = cum.k1 +
                   s * n_sigma * (2.0 * i / (n_points - 1) - 1.0);
        if (edgeworth_density(x, cum) < 0) return true;
    }
    return false;
}

double limit1_ode_check(const ModelParams& p, const Horizon& h) {
    ExponentInputs in = exponent_inputs(p, h);
    const cplx i(0, 1);
    double worst = 0;

    for (double w1 : {0.1, 1.0, 5.0, 20.0}) {
        cplx th = 1.0 / (2 * in.beta) - i * in.rho * w1;
        double w2 = w1 * w1;
        for (double frac : {0.25, 0.5, 1.0}) {
            double tau = in.tau * frac;
            double dt = 1e-6 * std::max(1.0, tau);
            ExponentTerms tp = terms_at(in, w1, tau + dt);
            ExponentTerms tm = terms_at(in, w1, tau - dt);
            ExponentTerms t0 = terms_at(in, w1, tau);

            cplx dA = (tp.A - tm.A) / (2 * dt);
            cplx dB = (tp.B - tm.B) / (2 * dt);
            cplx dC = (tp.C - tm.C) / (2 * dt);

            cplx rA = dA - (-2.0 * th * t0.A + 0.5 * in.lam * in.lam);
            cplx rB = dB - (-th * t0.B + 2.0 * i * w2 / in.lam * t0.A -
                            i * in.alpha * in.gamma * in.lam / (in.k * in.k) +
                            in.lam * in.rho * w1);
            cplx rC = dC - (i * w2 / in.lam * t0.B + 0.5 * w2 +
                            i * w1 / (2 * in.lam));

            worst = std::max({worst, std::abs(rA), std::abs(rB), std::abs(rC)});
        }
    }
    return worst;
}

}  // namespace expou
