#include "expou/linear_cf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace expou {

namespace {

constexpr double kPi = 3.14159265358979323846;

using cplx = std::complex<double>;

// log(1+z) without the cancellation of forming 1+z first.
cplx clog1p(cplx z) {
    double x = z.real(), y = z.imag();
    return {0.5 * std::log1p(2 * x + x * x + y * y), std::atan2(y, 1 + x)};
}

// exp(z) - 1, stable for small |z|.
cplx cexpm1(cplx z) {
    double x = z.real(), y = z.imag();
    double em = std::expm1(x);
    double s = std::sin(y);
    double c2 = -2 * std::sin(0.5 * y) * std::sin(0.5 * y);  // cos(y) - 1
    return {em * (1 + c2) + c2, (em + 1) * s};
}

struct ClosedForms {
    cplx A, B, C;
};

// The exponent pieces at horizon span T for a given frequency. The printed
// building blocks are rearranged so that no division by the (possibly tiny)
// g survives: n/g = (alpha/2k^2)(b+d) is used in exact form, and Lg/g keeps
// full relative precision through clog1p.
ClosedForms closed_forms(const AuxVars& v, double k, double alpha, double T) {
    cplx E1 = cexpm1(-v.d * T);        // E - 1
    cplx Eh1 = cexpm1(-0.5 * v.d * T); // E^{1/2} - 1
    cplx E = 1.0 + E1;
    cplx Eh = 1.0 + Eh1;
    cplx one_m_g = 1.0 - v.g;
    cplx one_m_gE = 1.0 - v.g * E;

    cplx Lg = clog1p(-v.g * E) - clog1p(-v.g);
    cplx Lgg = Lg / v.g;
    cplx frac = E1 / (one_m_g * one_m_gE);
    cplx V = (1.0 + v.g * Eh) * Eh1 / (one_m_g * one_m_gE);

    cplx ng = alpha / (2 * k * k) * (v.b + v.d);  // n / g, exactly
    cplx P = (v.g + 1.0) * v.h - 2.0 * v.n;
    cplx Q = v.n - v.g * v.h;
    cplx R = v.n - v.h;
    cplx d2 = v.d * v.d;
    cplx d3 = d2 * v.d;

    ClosedForms out;
    out.C = (v.b - v.d) / (4 * k * k) * (-E1) / one_m_gE;
    out.B = 2.0 * (Eh * P + v.n + E * Q - v.h) / (v.d * one_m_gE);

    cplx A = 0.5 * v.h * T;
    A += 2.0 * alpha * ((ng * (v.g + 1.0) - 2.0 * v.h) / d2 * Lg + R / v.d * T);
    A += 2.0 * k * k *
         (-v.g * (ng - v.h) * (ng - v.h) / d3 * (frac + Lgg) -
          (P * P + 2.0 * Q * R) / d3 * frac +
          R * R / d2 * (T + Lg / v.d - v.g / v.d * frac) -
          2.0 * P * ((1.0 + v.g) * ng - 2.0 * v.h) / d3 * V);
    A += (v.b - v.d) / 4.0 * (T + (v.g - 1.0) / v.d * Lgg);
    out.A = A;
    return out;
}

struct OdeParams {
    double mbar, k, alpha, phi;
    cplx b, h;
};

// RHS of the forward system: dC/dT, dB/dT, dA/dT.
void ode_rhs(const OdeParams& o, const cplx* y, cplx* dy) {
    const cplx C = y[0], B = y[1];
    dy[0] = 2.0 * o.k * o.k * C * C - o.b * C -
            0.5 * o.mbar * o.mbar * o.phi * o.phi;
    dy[1] = (2.0 * o.k * o.k * C - 0.5 * o.b) * B + 2.0 * o.alpha * C - o.h;
    dy[2] = 0.5 * o.h + o.alpha * B + 0.5 * o.k * o.k * B * B + o.k * o.k * C;
}

ClosedForms integrate_rk4(const ModelParams& p, double phi, double T) {
    AuxVars v = aux_vars(phi, p);
    OdeParams o{p.mbar, p.k, p.alpha, phi, v.b, v.h};
    double dmag = std::abs(v.d);
    int n = std::max(4000, static_cast<int>(std::ceil(dmag * T * 500)));
    double step = T / n;

    cplx y[3] = {0, 0, 0};
    cplx k1[3], k2[3], k3[3], k4[3], tmp[3];
    for (int i = 0; i < n; ++i) {
        ode_rhs(o, y, k1);
        for (int j = 0; j < 3; ++j) tmp[j] = y[j] + 0.5 * step * k1[j];
        ode_rhs(o, tmp, k2);
        for (int j = 0; j < 3; ++j) tmp[j] = y[j] + 0.5 * step * k2[j];
        ode_rhs(o, tmp, k3);
        for (int j = 0; j < 3; ++j) tmp[j] = y[j] + step * k3[j];
        ode_rhs(o, tmp, k4);
        for (int j = 0; j < 3; ++j)
            y[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    return {y[2], y[1], y[0]};
}

void require_k_positive(const ModelParams& p, const char* who) {
    if (p.k <= 0)
        throw std::invalid_argument(std::string(who) +
                                    ": k must be positive (k = 0 collapses "
                                    "the CF to a plain Gaussian)");
}

}  // namespace

AuxVars aux_vars(double phi, const ModelParams& p) {
    const cplx i(0, 1);
    AuxVars v;
    cplx q = p.alpha - i * p.k * p.mbar * p.rho * phi;
    v.d = 2.0 * std::sqrt(p.k * p.k * p.mbar * p.mbar * phi * phi + q * q);
    v.b = 2.0 * q;
    v.g = (v.b - v.d) / (v.b + v.d);
    v.h = i * p.mbar * p.mbar * phi;
    v.n = p.alpha / (2 * p.k * p.k) * (v.b - v.d);
    return v;
}

CFValue cf_linear(double phi, const ModelParams& p, const Horizon& h,
                  double x0, std::optional<double> z0_opt) {
    require_k_positive(p, "cf_linear");
    const double T = h.span();
    const double z0 = z0_opt.value_or(p.y0 - p.gamma + 1.0);
    const cplx i(0, 1);

    CFValue out;
    out.phi = phi;
    if (phi == 0.0 || T == 0.0) {
        out.exponent = i * phi * x0;
        out.f = std::exp(out.exponent);
        return out;
    }

    AuxVars v = aux_vars(phi, p);
    ClosedForms cf = closed_forms(v, p.k, p.alpha, T);
    out.A = cf.A;
    out.B = cf.B;
    out.C = cf.C;
    out.exponent = cf.A + cf.B * z0 + cf.C * z0 * z0 + i * phi * x0;
    out.f = std::exp(out.exponent);
    return out;
}

RiccatiReport riccati_residual_check(const ModelParams& p, const Horizon& h) {
    require_k_positive(p, "riccati_residual_check");
    const double span = h.span();
    if (span <= 0)
        throw std::invalid_argument("riccati_residual_check: need t > t0");

    RiccatiReport rep;
    for (double phi : {0.5, 5.0, 50.0, 300.0, 1000.0}) {
        AuxVars v = aux_vars(phi, p);
        OdeParams o{p.mbar, p.k, p.alpha, phi, v.b, v.h};
        double dmag = std::abs(v.d);

        for (double fracT : {0.25, 1.0}) {
            double T = span * fracT;
            double dt = 7e-6 * std::max(1.0, T) / std::max(1.0, dmag);

            ClosedForms fp = closed_forms(v, p.k, p.alpha, T + dt);
            ClosedForms fm = closed_forms(v, p.k, p.alpha, T - dt);
            ClosedForms f0 = closed_forms(v, p.k, p.alpha, T);

            cplx y[3] = {f0.C, f0.B, f0.A};
            cplx rhs[3];
            ode_rhs(o, y, rhs);
            cplx fd[3] = {(fp.C - fm.C) / (2 * dt), (fp.B - fm.B) / (2 * dt),
                          (fp.A - fm.A) / (2 * dt)};
            for (int j = 0; j < 3; ++j)
                rep.fd_residual =
                    std::max(rep.fd_residual, std::abs(fd[j] - rhs[j]));
        }

        ClosedForms cf = closed_forms(v, p.k, p.alpha, span);
        ClosedForms oc = integrate_rk4(p, phi, span);
        rep.ode_mismatch = std::max(
            {rep.ode_mismatch, std::abs(cf.A - oc.A), std::abs(cf.B - oc.B),
             std::abs(cf.C - oc.C)});
    }
    return rep;
}

BranchScanReport branch_smoothness_scan(const ModelParams& p, const Horizon& h,
                                        double phi_max, int n_points,
                                        bool flip_root) {
    require_k_positive(p, "branch_smoothness_scan");
    if (n_points < 2 || phi_max <= 0)
        throw std::invalid_argument(
            "branch_smoothness_scan: need phi_max > 0 and n_points >= 2");
    const double T = h.span();

    BranchScanReport rep;
    double prev_arg = 0;
    bool have_prev = false;
    for (int j = 0; j < n_points; ++j) {
        double phi = (j + 1) * phi_max / n_points;
        AuxVars v = aux_vars(phi, p);
        cplx d = flip_root ? -v.d : v.d;
        cplx g = flip_root ? 1.0 / v.g : v.g;
        cplx w = 1.0 - g * std::exp(-d * T);
        double a = std::arg(w);
        if (have_prev) {
            double step = std::abs(a - prev_arg);
            rep.max_imag_step = std::max(rep.max_imag_step, step);
            if (step > kPi) ++rep.discontinuities;
        }
        prev_arg = a;
        have_prev = true;
    }
    return rep;
}

namespace {

// Standardized threshold of P(Z < 0); NaN marks the deterministic cases.
double negvol_argument(const ModelParams& p, double delta_t) {
    if (delta_t < 0)
        throw std::invalid_argument("negative_vol_probability: delta_t < 0");
    if (delta_t == 0 || p.k == 0)
        return std::numeric_limits<double>::quiet_NaN();
    double mean = 1 + p.gamma + (p.y0 - p.gamma) * std::exp(-p.alpha * delta_t);
    double var = p.beta * (1 - std::exp(-2 * p.alpha * delta_t));
    return mean / std::sqrt(var);
}

// ln erfc(x) for large positive x via the asymptotic series.
double ln_erfc_tail(double x) {
    double x2 = x * x;
    return -x2 - std::log(x * std::sqrt(kPi)) +
           std::log1p(-0.5 / x2 + 0.75 / (x2 * x2));
}

}  // namespace

double negative_vol_log10(const ModelParams& p, double delta_t) {
    double x = negvol_argument(p, delta_t);
    if (std::isnan(x)) return -std::numeric_limits<double>::infinity();
    if (x <= 25.0) return std::log10(0.5 * std::erfc(x));
    return (std::log(0.5) + ln_erfc_tail(x)) / std::log(10.0);
}

double negative_vol_probability(const ModelParams& p, double delta_t) {
    double x = negvol_argument(p, delta_t);
    if (std::isnan(x)) return 0.0;
    if (x <= 25.0) return 0.5 * std::erfc(x);
    return std::exp(std::log(0.5) + ln_erfc_tail(x));
}

}  // namespace expou
