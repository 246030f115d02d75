#include "expou/kernels.hpp"
#include "expou/rng.hpp"

#include "vmath_inl.hpp"

#include <immintrin.h>

// AVX2 variant: four paths per vector, state held in registers across the
// step loop. All floating-point arithmetic goes through the same lane
// templates as the scalar kernel; only the Philox integer core is written
// out in intrinsics (32-bit words live zero-extended in 64-bit lanes).

namespace expou::kern {

namespace {

struct ALane {
    using F = __m256d;
    using U = __m256i;
    static F set1(double v) { return _mm256_set1_pd(v); }
    static U set1u(std::uint64_t v) {
        return _mm256_set1_epi64x(static_cast<long long>(v));
    }
    static F add(F a, F b) { return _mm256_add_pd(a, b); }
    static F sub(F a, F b) { return _mm256_sub_pd(a, b); }
    static F mul(F a, F b) { return _mm256_mul_pd(a, b); }
    static F div(F a, F b) { return _mm256_div_pd(a, b); }
    static F sqrt(F a) { return _mm256_sqrt_pd(a); }
    static F minf(F a, F b) { return _mm256_min_pd(a, b); }
    static F maxf(F a, F b) { return _mm256_max_pd(a, b); }
    static F round_ne(F a) {
        return _mm256_round_pd(a, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    }
    static U cast_u(F a) { return _mm256_castpd_si256(a); }
    static F cast_f(U a) { return _mm256_castsi256_pd(a); }
    static U bits_of(double v) {
        return set1u(__builtin_bit_cast(std::uint64_t, v));
    }
    static F bits_f(U v) { return cast_f(v); }
    static U uand(U a, U b) { return _mm256_and_si256(a, b); }
    static U uor(U a, U b) { return _mm256_or_si256(a, b); }
    static U uxor(U a, U b) { return _mm256_xor_si256(a, b); }
    static U usub(U a, U b) { return _mm256_sub_epi64(a, b); }
    static U shl(U a, int n) { return _mm256_sll_epi64(a, _mm_cvtsi32_si128(n)); }
    static U shr(U a, int n) { return _mm256_srl_epi64(a, _mm_cvtsi32_si128(n)); }
    static U cmp_gt(F a, F b) {
        return _mm256_castpd_si256(_mm256_cmp_pd(a, b, _CMP_GT_OQ));
    }
    static U cmp_equ(U a, U b) { return _mm256_cmpeq_epi64(a, b); }
    static F sel(U mask, F a, F b) {
        return _mm256_blendv_pd(b, a, cast_f(mask));
    }
    static F sel_f(U mask, double a, double b) {
        return sel(mask, set1(a), set1(b));
    }
    static F fxor(F a, F b) { return _mm256_xor_pd(a, b); }
};

const __m256i kLow32 = _mm256_set1_epi64x(0xFFFFFFFFll);

// Four independent Philox4x32-10 cells, one per 64-bit lane quartet.
inline void philox_cells(__m256i x0, __m256i x1, __m256i x2, __m256i x3,
                         std::uint64_t seed, __m256i& wa, __m256i& wb) {
    const __m256i m0 = _mm256_set1_epi64x(0xD2511F53ll);
    const __m256i m1 = _mm256_set1_epi64x(0xCD9E8D57ll);
    __m256i k0 = _mm256_set1_epi64x(static_cast<long long>(seed & 0xFFFFFFFFull));
    __m256i k1 = _mm256_set1_epi64x(static_cast<long long>(seed >> 32));
    for (int r = 0; r < 10; ++r) {
        __m256i p0 = _mm256_mul_epu32(x0, m0);
        __m256i p2 = _mm256_mul_epu32(x2, m1);
        __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(
                         _mm256_srli_epi64(p2, 32), x1), k0);
        __m256i n1 = _mm256_and_si256(p2, kLow32);
        __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(
                         _mm256_srli_epi64(p0, 32), x3), k1);
        __m256i n3 = _mm256_and_si256(p0, kLow32);
        x0 = n0; x1 = n1; x2 = n2; x3 = n3;
        k0 = _mm256_and_si256(
            _mm256_add_epi64(k0, _mm256_set1_epi64x(0x9E3779B9ll)), kLow32);
        k1 = _mm256_and_si256(
            _mm256_add_epi64(k1, _mm256_set1_epi64x(0xBB67AE85ll)), kLow32);
    }
    wa = _mm256_or_si256(x0, _mm256_slli_epi64(x1, 32));
    wb = _mm256_or_si256(x2, _mm256_slli_epi64(x3, 32));
}

inline __m256i path_lanes(std::uint64_t path0) {
    return _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(path0)),
                            _mm256_set_epi64x(3, 2, 1, 0));
}

void em_exp_avx2(const ExpCtx& c, std::uint64_t seed, std::uint64_t path0,
                 std::uint64_t step0, std::uint64_t n_steps,
                 std::size_t n_paths, double* x, double* y) {
    const __m256d m = ALane::set1(c.m), dt = ALane::set1(c.dt),
                  sqdt = ALane::set1(c.sqdt), alpha = ALane::set1(c.alpha),
                  gamma = ALane::set1(c.gamma), k = ALane::set1(c.k),
                  rho = ALane::set1(c.rho), rhoc = ALane::set1(c.rhoc);
    std::size_t i = 0;
    for (; i + 4 <= n_paths; i += 4) {
        __m256i pid = path_lanes(path0 + i);
        __m256i ctr2 = _mm256_and_si256(pid, kLow32);
        __m256i ctr3 = _mm256_srli_epi64(pid, 32);
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d yv = _mm256_loadu_pd(y + i);
        for (std::uint64_t s = 0; s < n_steps; ++s) {
            const std::uint64_t step = step0 + s;
            __m256i x0 = _mm256_set1_epi64x(
                static_cast<long long>(step & 0xFFFFFFFFull));
            __m256i x1 = _mm256_set1_epi64x(static_cast<long long>(step >> 32));
            __m256i wa, wb;
            philox_cells(x0, x1, ctr2, ctr3, seed, wa, wb);
            __m256d e1, e2;
            box_muller<ALane>(wa, wb, e1, e2);
            em_exp_update<ALane>(xv, yv, e1, e2, m, dt, sqdt, alpha, gamma, k,
                                 rho, rhoc);
        }
        _mm256_storeu_pd(x + i, xv);
        _mm256_storeu_pd(y + i, yv);
    }
    if (i < n_paths)
        scalar_ops().em_exp(c, seed, path0 + i, step0, n_steps, n_paths - i,
                            x + i, y + i);
}

void em_lin_avx2(const LinCtx& c, std::uint64_t seed, std::uint64_t path0,
                 std::uint64_t step0, std::uint64_t n_steps,
                 std::size_t n_paths, double* x, double* z) {
    const __m256d mbar = ALane::set1(c.mbar), dt = ALane::set1(c.dt),
                  sqdt = ALane::set1(c.sqdt), alpha = ALane::set1(c.alpha),
                  k = ALane::set1(c.k), rho = ALane::set1(c.rho),
                  rhoc = ALane::set1(c.rhoc);
    std::size_t i = 0;
    for (; i + 4 <= n_paths; i += 4) {
        __m256i pid = path_lanes(path0 + i);
        __m256i ctr2 = _mm256_and_si256(pid, kLow32);
        __m256i ctr3 = _mm256_srli_epi64(pid, 32);
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d zv = _mm256_loadu_pd(z + i);
        for (std::uint64_t s = 0; s < n_steps; ++s) {
            const std::uint64_t step = step0 + s;
            __m256i x0 = _mm256_set1_epi64x(
                static_cast<long long>(step & 0xFFFFFFFFull));
            __m256i x1 = _mm256_set1_epi64x(static_cast<long long>(step >> 32));
            __m256i wa, wb;
            philox_cells(x0, x1, ctr2, ctr3, seed, wa, wb);
            __m256d e1, e2;
            box_muller<ALane>(wa, wb, e1, e2);
            em_lin_update<ALane>(xv, zv, e1, e2, mbar, dt, sqdt, alpha, k, rho,
                                 rhoc);
        }
        _mm256_storeu_pd(x + i, xv);
        _mm256_storeu_pd(z + i, zv);
    }
    if (i < n_paths)
        scalar_ops().em_lin(c, seed, path0 + i, step0, n_steps, n_paths - i,
                            x + i, z + i);
}

void init_normals_avx2(std::uint64_t seed, std::uint64_t path0, std::size_t n,
                       double* out) {
    const std::uint64_t step = init_draw_step;
    __m256i x0 = _mm256_set1_epi64x(
        static_cast<long long>(step & 0xFFFFFFFFull));
    __m256i x1 = _mm256_set1_epi64x(static_cast<long long>(step >> 32));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i pid = path_lanes(path0 + i);
        __m256i ctr2 = _mm256_and_si256(pid, kLow32);
        __m256i ctr3 = _mm256_srli_epi64(pid, 32);
        __m256i wa, wb;
        philox_cells(x0, x1, ctr2, ctr3, seed, wa, wb);
        __m256d e1, e2;
        box_muller<ALane>(wa, wb, e1, e2);
        _mm256_storeu_pd(out + i, e1);
        (void)e2;
    }
    if (i < n)
        scalar_ops().init_normals(seed, path0 + i, n - i, out + i);
}

}  // namespace

const KernelOps& avx2_ops() {
    static const KernelOps ops{em_exp_avx2, em_lin_avx2, init_normals_avx2,
                               "avx2"};
    return ops;
}

}  // namespace expou::kern
