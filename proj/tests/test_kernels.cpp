#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "expou/kernels.hpp"
#include "expou/rng.hpp"

#include "../src/kernels/vmath_inl.hpp"

using namespace expou;
using namespace expou::kern;

namespace {

struct StateBlock {
    std::vector<double> x, h;
    StateBlock(std::size_t n, double x0, double h0) : x(n, x0), h(n, h0) {}
    bool bit_equal(const StateBlock& o) const {
        return std::memcmp(x.data(), o.x.data(), x.size() * 8) == 0 &&
               std::memcmp(h.data(), o.h.data(), h.size() * 8) == 0;
    }
};

ExpCtx exp_ctx() {
    ExpCtx c;
    c.m = 0.1;
    c.dt = 1e-3;
    c.sqdt = std::sqrt(1e-3);
    c.alpha = 10.0;
    c.gamma = 0.1;
    c.k = 0.447;
    c.rho = -0.9;
    c.rhoc = std::sqrt(1.0 - 0.81);
    return c;
}

LinCtx lin_ctx() {
    LinCtx c;
    c.mbar = 0.11;
    c.dt = 1e-3;
    c.sqdt = std::sqrt(1e-3);
    c.alpha = 10.0;
    c.k = 0.447;
    c.rho = -0.9;
    c.rhoc = std::sqrt(1.0 - 0.81);
    return c;
}

}  // namespace

TEST_CASE("scalar and AVX2 kernels produce bit-identical paths") {
    if (!avx2_supported()) {
        MESSAGE("AVX2 not available on this host; equivalence not checked");
        return;
    }
    const std::size_t n = 103;  // odd size exercises the SIMD tail
    const std::uint64_t seed = 77, path0 = 5, step0 = 1234, n_steps = 57;

    ExpCtx ec = exp_ctx();
    StateBlock a(n, 0.0, 0.05), b(n, 0.0, 0.05);
    scalar_ops().em_exp(ec, seed, path0, step0, n_steps, n, a.x.data(),
                        a.h.data());
    avx2_ops().em_exp(ec, seed, path0, step0, n_steps, n, b.x.data(),
                      b.h.data());
    CHECK(a.bit_equal(b));

    LinCtx lc = lin_ctx();
    StateBlock c(n, 0.0, 1.0), d(n, 0.0, 1.0);
    scalar_ops().em_lin(lc, seed, path0, step0, n_steps, n, c.x.data(),
                        c.h.data());
    avx2_ops().em_lin(lc, seed, path0, step0, n_steps, n, d.x.data(),
                      d.h.data());
    CHECK(c.bit_equal(d));

    std::vector<double> ns(n, 0.0), nv(n, 0.0);
    scalar_ops().init_normals(seed, path0, n, ns.data());
    avx2_ops().init_normals(seed, path0, n, nv.data());
    CHECK(std::memcmp(ns.data(), nv.data(), n * 8) == 0);
}

TEST_CASE("kernel advance is invariant to step and path chunking") {
    const std::size_t n = 37;
    const std::uint64_t seed = 3, path0 = 11;
    ExpCtx ec = exp_ctx();

    StateBlock whole(n, 0.0, -0.2), split(n, 0.0, -0.2);
    scalar_ops().em_exp(ec, seed, path0, 0, 80, n, whole.x.data(),
                        whole.h.data());
    scalar_ops().em_exp(ec, seed, path0, 0, 29, n, split.x.data(),
                        split.h.data());
    scalar_ops().em_exp(ec, seed, path0, 29, 51, n, split.x.data(),
                        split.h.data());
    CHECK(whole.bit_equal(split));

    StateBlock parts(n, 0.0, -0.2);
    scalar_ops().em_exp(ec, seed, path0, 0, 80, 17, parts.x.data(),
                        parts.h.data());
    scalar_ops().em_exp(ec, seed, path0 + 17, 0, 80, n - 17,
                        parts.x.data() + 17, parts.h.data() + 17);
    CHECK(whole.bit_equal(parts));
}

TEST_CASE("init normals match the reserved stream cell") {
    std::vector<double> out(9);
    scalar_ops().init_normals(21, 100, 9, out.data());
    for (int i = 0; i < 9; ++i) {
        auto [e1, e2] = normal_pair(21, 100 + i, init_draw_step);
        (void)e2;
        CHECK(out[i] == e1);
    }
}

TEST_CASE("vector log matches libm") {
    double worst = 0.0;
    for (int i = 1; i <= 4000; ++i) {
        double x = i / 4000.0;  // Box-Muller domain
        double err = std::abs(vlog<SLane>(x) - std::log(x));
        worst = std::max(worst, err / std::max(1.0, std::abs(std::log(x))));
    }
    for (double x : {1e-300, 1e-12, 0.9999999, 1.0000001, 3.0, 1e12, 1e300})
        worst = std::max(worst, std::abs(vlog<SLane>(x) - std::log(x)) /
                                    std::max(1.0, std::abs(std::log(x))));
    CHECK(worst < 1e-14);
}

TEST_CASE("vector exp matches libm") {
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        double x = -30.0 + 60.0 * i / 4000.0;
        worst = std::max(worst,
                         std::abs(vexp<SLane>(x) / std::exp(x) - 1.0));
    }
    for (double x : {-600.0, -100.0, 100.0, 600.0})
        worst = std::max(worst,
                         std::abs(vexp<SLane>(x) / std::exp(x) - 1.0));
    CHECK(worst < 4e-15);
}

TEST_CASE("vector sincos matches libm on the unit turn") {
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        double u = i / 4000.0;
        double s, c;
        vsincos_2pi<SLane>(u, s, c);
        double a = 2.0 * 3.14159265358979323846 * u;
        worst = std::max(worst, std::abs(s - std::sin(a)));
        worst = std::max(worst, std::abs(c - std::cos(a)));
    }
    // The reference argument 2 pi u is itself rounded, which costs ~1e-15
    // near the ends of the turn.
    CHECK(worst < 1e-14);
}

TEST_CASE("uniform lane conversion agrees with the scalar helper") {
    for (std::uint64_t w : {0ull, 0xfffull, 0x0123456789abcdefull,
                            ~0ull, 0x8000000000000000ull}) {
        CHECK(uniform_from_u64<SLane>(w) == u64_to_uniform(w));
    }
}

TEST_CASE("kernel override switches the dispatch") {
    set_kernel_override(KernelKind::Scalar);
    CHECK(std::string(kernel_ops().name) == "scalar");
    if (avx2_supported()) {
        set_kernel_override(KernelKind::Avx2);
        CHECK(std::string(kernel_ops().name) == "avx2");
    }
    set_kernel_override(KernelKind::Auto);
    CHECK((std::string(kernel_ops().name) == "scalar" ||
           std::string(kernel_ops().name) == "avx2"));
}
