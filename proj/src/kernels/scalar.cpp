#include "expou/kernels.hpp"
#include "expou/rng.hpp"

#include "vmath_inl.hpp"

namespace expou::kern {

namespace {

inline void cell_words(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                       std::uint64_t& wa, std::uint64_t& wb) {
    philox::ctr_t c{static_cast<std::uint32_t>(step),
                    static_cast<std::uint32_t>(step >> 32),
                    static_cast<std::uint32_t>(path),
                    static_cast<std::uint32_t>(path >> 32)};
    philox::key_t k{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
    philox::ctr_t o = philox::philox4x32_10(c, k);
    wa = o[0] | (static_cast<std::uint64_t>(o[1]) << 32);
    wb = o[2] | (static_cast<std::uint64_t>(o[3]) << 32);
}

void em_exp_scalar(const ExpCtx& c, std::uint64_t seed, std::uint64_t path0,
                   std::uint64_t step0, std::uint64_t n_steps,
                   std::size_t n_paths, double* x, double* y) {
    for (std::size_t i = 0; i < n_paths; ++i) {
        double xi = x[i], yi = y[i];
        const std::uint64_t pid = path0 + i;
        for (std::uint64_t s = 0; s < n_steps; ++s) {
            std::uint64_t wa, wb;
            cell_words(seed, pid, step0 + s, wa, wb);
            double e1, e2;
            box_muller<SLane>(wa, wb, e1, e2);
            em_exp_update<SLane>(xi, yi, e1, e2, c.m, c.dt, c.sqdt, c.alpha,
                                 c.gamma, c.k, c.rho, c.rhoc);
        }
        x[i] = xi;
        y[i] = yi;
    }
}

void em_lin_scalar(const LinCtx& c, std::uint64_t seed, std::uint64_t path0,
                   std::uint64_t step0, std::uint64_t n_steps,
                   std::size_t n_paths, double* x, double* z) {
    for (std::size_t i = 0; i < n_paths; ++i) {
        double xi = x[i], zi = z[i];
        const std::uint64_t pid = path0 + i;
        for (std::uint64_t s = 0; s < n_steps; ++s) {
            std::uint64_t wa, wb;
            cell_words(seed, pid, step0 + s, wa, wb);
            double e1, e2;
            box_muller<SLane>(wa, wb, e1, e2);
            em_lin_update<SLane>(xi, zi, e1, e2, c.mbar, c.dt, c.sqdt, c.alpha,
                                 c.k, c.rho, c.rhoc);
        }
        x[i] = xi;
        z[i] = zi;
    }
}

void init_normals_scalar(std::uint64_t seed, std::uint64_t path0, std::size_t n,
                         double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t wa, wb;
        cell_words(seed, path0 + i, init_draw_step, wa, wb);
        double e1, e2;
        box_muller<SLane>(wa, wb, e1, e2);
        out[i] = e1;
        (void)e2;
    }
}

}  // namespace

const KernelOps& scalar_ops() {
    static const KernelOps ops{em_exp_scalar, em_lin_scalar,
                               init_normals_scalar, "scalar"};
    return ops;
}

}  // namespace expou::kern
