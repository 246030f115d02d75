#pragma once

#include <cstdint>

// Simulation kernels: scalar reference implementation plus an AVX2 variant,
// selected at runtime. Both advance Euler-Maruyama state in registers across
// a step range and are required (and tested) to produce bit-identical output.

namespace expou::kern {

struct ExpCtx {
    double m, dt, sqdt, alpha, gamma, k, rho, rhoc;  // rhoc = sqrt(1 - rho^2)
};

struct LinCtx {
    double mbar, dt, sqdt, alpha, k, rho, rhoc;
};

// Advance n_paths paths (ids path0 .. path0+n_paths-1) from step0 through
// step0+n_steps-1. x and y (or z) hold the state vectors and are updated in
// place. Randomness is addressed by (seed, path id, step index) only.
using em_exp_fn = void (*)(const ExpCtx&, std::uint64_t seed, std::uint64_t path0,
                           std::uint64_t step0, std::uint64_t n_steps,
                           std::size_t n_paths, double* x, double* y);
using em_lin_fn = void (*)(const LinCtx&, std::uint64_t seed, std::uint64_t path0,
                           std::uint64_t step0, std::uint64_t n_steps,
                           std::size_t n_paths, double* x, double* z);
// First Box-Muller component at the reserved init-draw step, for per-path
// initial-state randomization.
using init_normals_fn = void (*)(std::uint64_t seed, std::uint64_t path0,
                                 std::size_t n, double* out);

struct KernelOps {
    em_exp_fn em_exp;
    em_lin_fn em_lin;
    init_normals_fn init_normals;
    const char* name;
};

enum class KernelKind { Auto, Scalar, Avx2 };

// Resolution order: programmatic override, then EXPOU_KERNEL environment
// variable ("scalar" / "avx2"), then CPU detection.
void set_kernel_override(KernelKind kind);
const KernelOps& kernel_ops();
bool avx2_supported();

// Direct access for the equivalence tests.
const KernelOps& scalar_ops();
const KernelOps& avx2_ops();  // valid only if avx2_supported()

}  // namespace expou::kern
