#include "doctest.h"

#include <cmath>
#include <vector>

#include "expou/optim.hpp"

using namespace expou;

TEST_CASE("brent finds interior minima") {
    BrentResult r = brent_min([](double x) { return (x - 2.3) * (x - 2.3); },
                              -10.0, 10.0);
    CHECK(r.x == doctest::Approx(2.3).epsilon(1e-7));
    CHECK(r.fx < 1e-12);

    // Non-quadratic, asymmetric well.
    BrentResult s = brent_min(
        [](double x) { return std::cosh(x - 0.7) + 0.1 * x; }, -4.0, 4.0,
        1e-10);
    // Stationarity: sinh(x - 0.7) = -0.1.
    CHECK(std::sinh(s.x - 0.7) == doctest::Approx(-0.1).epsilon(1e-5));
}

TEST_CASE("brent respects the bracket") {
    BrentResult r = brent_min([](double x) { return x; }, 0.0, 1.0);
    CHECK(r.x >= 0.0);
    CHECK(r.x <= 1.0);
    CHECK(r.x == doctest::Approx(0.0).scale(1).epsilon(1e-6));
}

TEST_CASE("powell minimizes an anisotropic bowl") {
    auto f = [](std::vector<double> v) {
        double a = v[0] - 5.0, b = v[1] + 0.3;
        return a * a + 10.0 * b * b;
    };
    PowellResult r = powell_min(f, {1.0, 1.0}, {0.5, 0.5}, 1e-12);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(5.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(-0.3).epsilon(1e-3));
    CHECK(r.fx < 1e-7);
}

TEST_CASE("powell handles coupled coordinates") {
    // Rotated quadratic: the separable coordinate sweeps alone would zigzag;
    // the direction replacement should still converge quickly.
    auto f = [](std::vector<double> v) {
        double u = v[0] + v[1] - 1.0, w = v[0] - v[1] + 0.5;
        return 3.0 * u * u + 0.5 * w * w;
    };
    PowellResult r = powell_min(f, {4.0, -3.0}, {1.0, 1.0}, 1e-13, 100);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(r.x[1] == doctest::Approx(0.75).epsilon(1e-3));
}

TEST_CASE("powell absolute floor stops noisy descents") {
    // A flat-bottomed objective whose improvements quickly fall below the
    // floor; the sweep count must stay small.
    auto f = [](std::vector<double> v) {
        return 1.0 + 1e-6 * (v[0] * v[0] + v[1] * v[1]);
    };
    PowellResult r = powell_min(f, {1.0, 1.0}, {0.5, 0.5}, 1e-10, 50, 1e-4,
                                0.5);
    CHECK(r.sweeps <= 2);
    CHECK(r.converged);
}
