#include "expou/model.hpp"

#include <cmath>

namespace expou {

Horizon Horizon::of(const ModelParams& p, double t, double t0) {
    if (t < t0)
        throw validation_error("t", "horizon end before start: t < t0");
    return Horizon{t0, t, p.alpha * (t - t0)};
}

ModelParams validate(const RawParams& r) {
    auto bad = [](const char* field, const std::string& msg) {
        throw validation_error(field, std::string(field) + ": " + msg);
    };
    auto finite = [&](const char* field, double v) {
        if (!std::isfinite(v)) bad(field, "must be finite");
    };
    finite("s0", r.s0); finite("mu", r.mu); finite("m", r.m);
    finite("y0", r.y0); finite("alpha", r.alpha); finite("gamma", r.gamma);
    finite("k", r.k); finite("rho", r.rho);

    if (r.s0 <= 0) bad("s0", "initial price must be > 0");
    if (r.m <= 0) bad("m", "volatility level must be > 0");
    if (r.alpha <= 0) bad("alpha", "mean-reversion rate must be > 0");
    if (r.k < 0) bad("k", "vol-of-vol must be >= 0");
    if (r.rho < -1.0 || r.rho > 1.0) bad("rho", "correlation must lie in [-1, 1]");

    ModelParams p{r.s0, r.mu, r.m, r.y0, r.alpha, r.gamma, r.k, r.rho,
                  0.0, 0.0, 0.0};
    p.beta = r.k * r.k / (2.0 * r.alpha);
    p.lam = r.k / r.m;
    p.mbar = r.m * std::exp(r.gamma);
    return p;
}

double ou_mean(const ModelParams& p, const Horizon& h) {
    return (p.y0 - p.gamma) * std::exp(-p.alpha * h.span()) + p.gamma;
}

double ou_variance(const ModelParams& p, const Horizon& h) {
    // The printed form of the transition variance carries a "+" inside the
    // bracket, which would give 2 beta at zero lag and contradict both the
    // delta initial condition and the stated stationary limit; the corrected
    // "-" form is implemented.
    double e = std::exp(-2.0 * p.alpha * h.span());
    return p.beta * (1.0 - e);
}

}
