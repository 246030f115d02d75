#include "doctest.h"

#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

#include "expou/kernels.hpp"
#include "expou/mc.hpp"
#include "expou/model.hpp"

using namespace expou;

namespace {

ModelParams base_params(double k = 0.447, double rho = -0.9) {
    RawParams r;
    r.m = 0.1;
    r.alpha = 10.0;
    r.k = k;
    r.rho = rho;
    return validate(r);
}

double mean_of(const double* v, std::size_t n) {
    return std::accumulate(v, v + n, 0.0) / n;
}

double var_of(const double* v, std::size_t n) {
    double mu = mean_of(v, n);
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += (v[i] - mu) * (v[i] - mu);
    return s / (n - 1);
}

}  // namespace

TEST_CASE("constant volatility reduces to arithmetic Brownian motion") {
    RawParams r;
    r.m = 0.2;
    r.y0 = 0.1;
    r.gamma = 0.1;  // y0 = gamma: with k = 0 the drift pins Y exactly
    r.k = 0.0;
    ModelParams p = validate(r);
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 250;
    cfg.n_paths = 40000;
    cfg.seed = 11;
    cfg.record_hidden = true;
    PathEnsemble ens = simulate(p, cfg);

    double T = cfg.dt * cfg.n_steps;
    double vol = 0.2 * std::exp(0.1);
    double want_mean = -0.5 * vol * vol * T;
    double want_var = vol * vol * T;
    double se = vol * std::sqrt(T / cfg.n_paths);
    CHECK(std::abs(mean_of(ens.x_final(), ens.n_paths) - want_mean) <
          4 * se);
    CHECK(std::abs(var_of(ens.x_final(), ens.n_paths) / want_var - 1.0) <
          4 * std::sqrt(2.0 / cfg.n_paths));
    // Y never moves without vol-of-vol.
    for (std::size_t i = 0; i < 100; ++i)
        CHECK(ens.hidden_at(0)[i] == 0.1);
}

TEST_CASE("hidden OU marginals match the exact Euler recursion") {
    RawParams r;
    r.m = 0.1;
    r.y0 = -0.4;
    r.gamma = 0.2;
    r.alpha = 2.0;
    r.k = 0.6;
    ModelParams p = validate(r);
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 500;
    cfg.n_paths = 50000;
    cfg.seed = 12;
    cfg.record_hidden = true;
    PathEnsemble ens = simulate(p, cfg);

    // The discrete recursion Y_{j+1} = Y_j + alpha (gamma - Y_j) dt +
    // k sqrt(dt) eps has exactly computable first two moments; against these
    // the only test error is sampling noise.
    double a = 1.0 - 2.0 * cfg.dt;
    double n = static_cast<double>(cfg.n_steps);
    double want_mean = (-0.4 - 0.2) * std::pow(a, n) + 0.2;
    double want_var = 0.6 * 0.6 * cfg.dt *
                      (1.0 - std::pow(a * a, n)) / (1.0 - a * a);
    const double* y = ens.hidden_at(0);
    double se_mean = std::sqrt(want_var / cfg.n_paths);
    double se_var = want_var * std::sqrt(2.0 / cfg.n_paths);
    CHECK(std::abs(mean_of(y, ens.n_paths) - want_mean) < 4 * se_mean);
    CHECK(std::abs(var_of(y, ens.n_paths) - want_var) < 4 * se_var);
}

TEST_CASE("price and volatility shocks carry the configured correlation") {
    ModelParams p = base_params(0.447, -0.7);
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1;
    cfg.n_paths = 200000;
    cfg.seed = 13;
    cfg.record_hidden = true;
    PathEnsemble ens = simulate(p, cfg);

    // Over a single step both increments are linear in the driving pair, so
    // their correlation estimates rho directly.
    std::vector<double> dx(ens.x_at(0), ens.x_at(0) + ens.n_paths);
    std::vector<double> dy(ens.hidden_at(0), ens.hidden_at(0) + ens.n_paths);
    double mx = mean_of(dx.data(), dx.size());
    double my = mean_of(dy.data(), dy.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        sxy += (dx[i] - mx) * (dy[i] - my);
        sxx += (dx[i] - mx) * (dx[i] - mx);
        syy += (dy[i] - my) * (dy[i] - my);
    }
    double corr = sxy / std::sqrt(sxx * syy);
    CHECK(std::abs(corr - (-0.7)) < 4.0 / std::sqrt(1.0 * cfg.n_paths));
}

TEST_CASE("stationary start keeps the hidden process in its stationary law") {
    RawParams r;
    r.m = 0.1;
    r.alpha = 10.0;
    r.gamma = 0.3;
    r.k = std::sqrt(2.0 * 10.0 * 0.05);
    ModelParams p = validate(r);
    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.n_steps = 1;
    cfg.n_paths = 100000;
    cfg.seed = 14;
    cfg.record_hidden = true;
    cfg.initial = InitialState::Stationary;
    PathEnsemble ens = simulate(p, cfg);

    const double* y = ens.hidden_at(0);
    double se_mean = std::sqrt(0.05 / cfg.n_paths);
    CHECK(std::abs(mean_of(y, ens.n_paths) - 0.3) < 4 * se_mean);
    CHECK(std::abs(var_of(y, ens.n_paths) / 0.05 - 1.0) <
          4 * std::sqrt(2.0 / cfg.n_paths) + 3.0 * cfg.dt);
}

TEST_CASE("linear dynamics start from Z = 1 when fixed") {
    ModelParams p = base_params();
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1;
    cfg.n_paths = 64;
    cfg.seed = 15;
    cfg.dynamics = Dynamics::Linear;
    cfg.record_hidden = true;
    PathEnsemble ens = simulate(p, cfg);
    // One step of drift alpha (1 - z) dt from z = 1 leaves only the shock.
    for (std::size_t i = 0; i < ens.n_paths; ++i)
        CHECK(std::abs(ens.hidden_at(0)[i] - 1.0) < 0.2);
}

TEST_CASE("checkpoints must sit on the step grid") {
    ModelParams p = base_params();
    SimConfig cfg;
    cfg.dt = 0.1;
    cfg.n_steps = 10;
    cfg.n_paths = 2;
    CHECK_THROWS(simulate(p, cfg, {0.15}));
    CHECK_THROWS(simulate(p, cfg, {1.1}));
    CHECK_THROWS(simulate(p, cfg, {0.0}));
    PathEnsemble ens = simulate(p, cfg, {0.1, 0.5, 1.0});
    REQUIRE(ens.n_checkpoints() == 3);
    CHECK(ens.checkpoint_times[1] == doctest::Approx(0.5));
}

TEST_CASE("results are independent of thread count and kernel") {
    ModelParams p = base_params();
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 200;
    cfg.n_paths = 5000;
    cfg.seed = 16;
    cfg.record_hidden = true;

    cfg.n_threads = 1;
    PathEnsemble one = simulate(p, cfg, {0.1, 0.2});
    cfg.n_threads = 3;
    PathEnsemble three = simulate(p, cfg, {0.1, 0.2});
    REQUIRE(one.x.size() == three.x.size());
    CHECK(std::memcmp(one.x.data(), three.x.data(), one.x.size() * 8) == 0);
    CHECK(std::memcmp(one.hidden.data(), three.hidden.data(),
                      one.hidden.size() * 8) == 0);

    if (kern::avx2_supported()) {
        kern::set_kernel_override(kern::KernelKind::Scalar);
        PathEnsemble sc = simulate(p, cfg, {0.1, 0.2});
        kern::set_kernel_override(kern::KernelKind::Avx2);
        PathEnsemble av = simulate(p, cfg, {0.1, 0.2});
        kern::set_kernel_override(kern::KernelKind::Auto);
        CHECK(std::memcmp(sc.x.data(), av.x.data(), sc.x.size() * 8) == 0);
        CHECK(std::memcmp(sc.hidden.data(), av.hidden.data(),
                          sc.hidden.size() * 8) == 0);
    }
}
