#include "doctest.h"

#include <cmath>

#include "expou/model.hpp"

using namespace expou;

TEST_CASE("validate fills derived quantities") {
    RawParams r;
    r.m = 0.1;
    r.alpha = 10.0;
    r.k = std::sqrt(2.0 * 10.0 * 0.01);
    r.gamma = 0.25;
    r.rho = -0.9;
    ModelParams p = validate(r);
    CHECK(p.beta == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(p.lam == doctest::Approx(r.k / r.m).epsilon(1e-14));
    CHECK(p.mbar == doctest::Approx(0.1 * std::exp(0.25)).epsilon(1e-14));
}

TEST_CASE("validate rejects out-of-range fields") {
    auto field_of = [](RawParams r) {
        try {
            validate(r);
        } catch (const validation_error& e) {
            return e.field();
        }
        return std::string("none");
    };
    RawParams r;

    r.s0 = 0.0;
    CHECK(field_of(r) == "s0");
    r = RawParams{};
    r.m = -0.1;
    CHECK(field_of(r) == "m");
    r = RawParams{};
    r.m = 0.0;
    CHECK(field_of(r) == "m");
    r = RawParams{};
    r.alpha = 0.0;
    CHECK(field_of(r) == "alpha");
    r = RawParams{};
    r.k = -0.5;
    CHECK(field_of(r) == "k");
    r = RawParams{};
    r.rho = 1.5;
    CHECK(field_of(r) == "rho");
    r = RawParams{};
    r.rho = -1.5;
    CHECK(field_of(r) == "rho");
    // The closed interval ends are legal correlations.
    r = RawParams{};
    r.rho = 1.0;
    CHECK(field_of(r) == "none");
    r.rho = -1.0;
    CHECK(field_of(r) == "none");

    // k = 0 (no stochastic volatility) is a legal degenerate case.
    r = RawParams{};
    r.k = 0.0;
    CHECK(field_of(r) == "none");
}

TEST_CASE("horizon scaling") {
    RawParams r;
    r.alpha = 4.0;
    ModelParams p = validate(r);
    Horizon h = Horizon::of(p, 2.5, 0.5);
    CHECK(h.span() == doctest::Approx(2.0));
    CHECK(h.zeta == doctest::Approx(8.0));
}

TEST_CASE("OU conditional moments") {
    RawParams r;
    r.y0 = -0.3;
    r.gamma = 0.2;
    r.alpha = 3.0;
    r.k = 0.9;
    ModelParams p = validate(r);
    Horizon h = Horizon::of(p, 0.7);
    double e = std::exp(-3.0 * 0.7);
    CHECK(ou_mean(p, h) ==
          doctest::Approx((-0.3 - 0.2) * e + 0.2).epsilon(1e-14));
    double beta = 0.9 * 0.9 / (2.0 * 3.0);
    CHECK(ou_variance(p, h) ==
          doctest::Approx(beta * (1.0 - e * e)).epsilon(1e-14));

    // Long horizon: the conditional law forgets y0 and approaches the
    // stationary one.
    Horizon far = Horizon::of(p, 50.0);
    CHECK(ou_mean(p, far) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(ou_variance(p, far) == doctest::Approx(beta).epsilon(1e-12));
}
