#pragma once

// Lane-templated elementary functions for the simulation kernels.
//
// The same expression tree is instantiated once with the scalar lane and once
// with the AVX2 lane, and the kernel translation units are compiled with
// -ffp-contract=off, so both instantiations perform the identical sequence of
// IEEE-754 operations. That is what makes the scalar and SIMD engines produce
// bit-identical path ensembles, which the equivalence tests assert.
//
// Accuracy targets are ~1-2 ulp on the reduced ranges actually used by the
// generator (uniforms in (0,1), OU exponents of modest size); that is far
// below Monte Carlo resolution, and reproducibility, not last-bit libm
// agreement, is the design goal.

#include <cstdint>

namespace expou::kern {

// Coefficients shared by every instantiation.
namespace vm {
inline constexpr double ln2_hi = 6.93147180369123816490e-01;
inline constexpr double ln2_lo = 1.90821492927058770002e-10;
inline constexpr double log2e = 1.44269504088896338700e+00;
inline constexpr double two_pi = 6.28318530717958647693e+00;
inline constexpr double two52 = 4503599627370496.0;        // 2^52
inline constexpr double inv_two52 = 1.0 / 4503599627370496.0;
inline constexpr double sqrt2 = 1.41421356237309504880e+00;

// atanh series for log: ln m = 2t (1 + t^2/3 + t^4/5 + ...), t = (m-1)/(m+1)
inline constexpr double logc[10] = {
    1.0 / 3.0,  1.0 / 5.0,  1.0 / 7.0,  1.0 / 9.0,  1.0 / 11.0,
    1.0 / 13.0, 1.0 / 15.0, 1.0 / 17.0, 1.0 / 19.0, 1.0 / 21.0};

// fdlibm kernel coefficients on [-pi/4, pi/4]
inline constexpr double S1 = -1.66666666666666324348e-01;
inline constexpr double S2 = 8.33333333332248946124e-03;
inline constexpr double S3 = -1.98412698298579493134e-04;
inline constexpr double S4 = 2.75573137070700676789e-06;
inline constexpr double S5 = -2.50507602534068634195e-08;
inline constexpr double S6 = 1.58969099521155010221e-10;
inline constexpr double C1 = 4.16666666666666019037e-02;
inline constexpr double C2 = -1.38888888888741095749e-03;
inline constexpr double C3 = 2.48015872894767294178e-05;
inline constexpr double C4 = -2.75573143513906633035e-07;
inline constexpr double C5 = 2.08757232129817482790e-09;
inline constexpr double C6 = -1.13596475577881948265e-11;

// inverse factorials for exp, 1/2! .. 1/13!
inline constexpr double expc[12] = {
    1.0 / 2.0,          1.0 / 6.0,           1.0 / 24.0,
    1.0 / 120.0,        1.0 / 720.0,         1.0 / 5040.0,
    1.0 / 40320.0,      1.0 / 362880.0,      1.0 / 3628800.0,
    1.0 / 39916800.0,   1.0 / 479001600.0,   1.0 / 6227020800.0};
}  // namespace vm

// Exact double(w) for integer w < 2^52, built from bit operations only so the
// scalar and SIMD paths cannot diverge by conversion-instruction choice.
template <class L>
inline typename L::F u52_to_f64(typename L::U w) {
    typename L::U bits = L::uor(w, L::bits_of(vm::two52));
    return L::sub(L::cast_f(bits), L::set1(vm::two52));
}

// Uniform in (0,1): ((w >> 12) + 1/2) * 2^-52.
template <class L>
inline typename L::F uniform_from_u64(typename L::U w) {
    typename L::F d = u52_to_f64<L>(L::shr(w, 12));
    return L::mul(L::add(d, L::set1(0.5)), L::set1(vm::inv_two52));
}

// Natural log for positive normal arguments.
template <class L>
inline typename L::F vlog(typename L::F x) {
    using F = typename L::F;
    using U = typename L::U;
    U bits = L::cast_u(x);
    // exponent as double, mantissa remapped to [1, 2)
    F e = L::sub(u52_to_f64<L>(L::shr(bits, 52)), L::set1(1023.0));
    U mbits = L::uor(L::uand(bits, L::set1u(0x000FFFFFFFFFFFFFull)),
                     L::bits_of(1.0));
    F m = L::cast_f(mbits);
    // fold [sqrt2, 2) down to [sqrt2/2, sqrt2)
    U big = L::cmp_gt(m, L::set1(vm::sqrt2));
    m = L::sel(big, L::mul(m, L::set1(0.5)), m);
    e = L::add(e, L::sel_f(big, 1.0, 0.0));
    F t = L::div(L::sub(m, L::set1(1.0)), L::add(m, L::set1(1.0)));
    F s = L::mul(t, t);
    F p = L::set1(vm::logc[9]);
    for (int j = 8; j >= 0; --j)
        p = L::add(L::set1(vm::logc[j]), L::mul(s, p));
    F two_t = L::add(t, t);
    // ln x = e ln2 + 2t + 2t s P(s)
    F r = L::add(L::mul(e, L::set1(vm::ln2_hi)),
                 L::add(two_t,
                        L::add(L::mul(L::mul(two_t, s), p),
                               L::mul(e, L::set1(vm::ln2_lo)))));
    return r;
}

// e^x for |x| up to ~700 (clamped).
template <class L>
inline typename L::F vexp(typename L::F x) {
    using F = typename L::F;
    using U = typename L::U;
    x = L::maxf(L::set1(-700.0), L::minf(L::set1(700.0), x));
    F nf = L::round_ne(L::mul(x, L::set1(vm::log2e)));
    F r = L::sub(L::sub(x, L::mul(nf, L::set1(vm::ln2_hi))),
                 L::mul(nf, L::set1(vm::ln2_lo)));
    F p = L::set1(vm::expc[11]);
    for (int j = 10; j >= 0; --j)
        p = L::add(L::set1(vm::expc[j]), L::mul(r, p));
    F er = L::add(L::set1(1.0), L::add(r, L::mul(L::mul(r, r), p)));
    // 2^n by exponent assembly: n is integral in [-1024, 1024]
    U nbits = L::uand(L::cast_u(L::add(nf, L::set1(vm::two52 * 1.5))),
                      L::set1u(0x000FFFFFFFFFFFFFull));
    // low bits now hold n + 2^51; rebias to n + 1023 and shift into place
    U ebits = L::shl(L::usub(nbits, L::set1u((1ull << 51) - 1023ull)), 52);
    return L::mul(er, L::cast_f(ebits));
}

// sin(2 pi u) and cos(2 pi u) for u in (0, 1).
template <class L>
inline void vsincos_2pi(typename L::F u, typename L::F& s_out,
                        typename L::F& c_out) {
    using F = typename L::F;
    using U = typename L::U;
    F qf = L::round_ne(L::mul(u, L::set1(4.0)));
    F r = L::sub(u, L::mul(qf, L::set1(0.25)));  // exact: |r| <= 1/8
    F x = L::mul(r, L::set1(vm::two_pi));        // |x| <= pi/4
    F z = L::mul(x, x);
    F ps = L::set1(vm::S6);
    ps = L::add(L::set1(vm::S5), L::mul(z, ps));
    ps = L::add(L::set1(vm::S4), L::mul(z, ps));
    ps = L::add(L::set1(vm::S3), L::mul(z, ps));
    ps = L::add(L::set1(vm::S2), L::mul(z, ps));
    ps = L::add(L::set1(vm::S1), L::mul(z, ps));
    F sk = L::add(x, L::mul(L::mul(x, z), ps));  // sin kernel
    F pc = L::set1(vm::C6);
    pc = L::add(L::set1(vm::C5), L::mul(z, pc));
    pc = L::add(L::set1(vm::C4), L::mul(z, pc));
    pc = L::add(L::set1(vm::C3), L::mul(z, pc));
    pc = L::add(L::set1(vm::C2), L::mul(z, pc));
    pc = L::add(L::set1(vm::C1), L::mul(z, pc));
    F ck = L::add(L::sub(L::set1(1.0), L::mul(z, L::set1(0.5))),
                  L::mul(L::mul(z, z), pc));      // cos kernel
    // quadrant q = qf mod 4 decides swap and signs
    U q = L::uand(L::cast_u(L::add(qf, L::set1(vm::two52 * 1.5))),
                  L::set1u(3));
    U bit0 = L::cmp_equ(L::uand(q, L::set1u(1)), L::set1u(1));
    U bit1 = L::cmp_equ(L::uand(q, L::set1u(2)), L::set1u(2));
    F s_base = L::sel(bit0, ck, sk);
    F c_base = L::sel(bit0, sk, ck);
    // sin sign flips for q in {2,3}; cos sign flips for q in {1,2}
    U sflip = bit1;
    U cflip = L::uxor(bit0, bit1);
    F sgn = L::bits_f(L::set1u(0x8000000000000000ull));
    s_out = L::sel(sflip, L::fxor(s_base, sgn), s_base);
    c_out = L::sel(cflip, L::fxor(c_base, sgn), c_base);
}

// Box-Muller: one Philox cell (two 64-bit words) -> one standard normal pair.
template <class L>
inline void box_muller(typename L::U wa, typename L::U wb,
                       typename L::F& e1, typename L::F& e2) {
    using F = typename L::F;
    F u1 = uniform_from_u64<L>(wa);
    F u2 = uniform_from_u64<L>(wb);
    F rad = L::sqrt(L::mul(L::set1(-2.0), vlog<L>(u1)));
    F s, c;
    vsincos_2pi<L>(u2, s, c);
    e1 = L::mul(rad, c);
    e2 = L::mul(rad, s);
}

// One Euler-Maruyama step of the exponential dynamics; drift and diffusion
// evaluated at the step-start state. Shared by the scalar and SIMD kernels so
// the operation sequence is identical by construction.
template <class L>
inline void em_exp_update(typename L::F& x, typename L::F& y,
                          typename L::F e1, typename L::F e2,
                          typename L::F m, typename L::F dt, typename L::F sqdt,
                          typename L::F alpha, typename L::F gamma,
                          typename L::F k, typename L::F rho,
                          typename L::F rhoc) {
    using F = typename L::F;
    F vol = L::mul(m, vexp<L>(y));
    F dx = L::add(L::mul(L::mul(L::mul(L::set1(-0.5), vol), vol), dt),
                  L::mul(L::mul(vol, sqdt), e1));
    F dy = L::add(L::mul(L::mul(alpha, L::sub(gamma, y)), dt),
                  L::mul(L::mul(k, sqdt),
                         L::add(L::mul(rho, e1), L::mul(rhoc, e2))));
    x = L::add(x, dx);
    y = L::add(y, dy);
}

// One Euler-Maruyama step of the linearized dynamics (Z unconstrained; no
// reflection at zero).
template <class L>
inline void em_lin_update(typename L::F& x, typename L::F& z,
                          typename L::F e1, typename L::F e2,
                          typename L::F mbar, typename L::F dt,
                          typename L::F sqdt, typename L::F alpha,
                          typename L::F k, typename L::F rho,
                          typename L::F rhoc) {
    using F = typename L::F;
    F drift = L::mul(L::mul(L::mul(L::set1(-0.5), L::mul(mbar, mbar)),
                            L::sub(L::add(z, z), L::set1(1.0))),
                     dt);
    F dx = L::add(drift, L::mul(L::mul(L::mul(mbar, z), sqdt), e1));
    F dz = L::add(L::mul(L::mul(alpha, L::sub(L::set1(1.0), z)), dt),
                  L::mul(L::mul(k, sqdt),
                         L::add(L::mul(rho, e1), L::mul(rhoc, e2))));
    x = L::add(x, dx);
    z = L::add(z, dz);
}

// Scalar lane: plain doubles and uint64 bit twiddling.
struct SLane {
    using F = double;
    using U = std::uint64_t;
    static F set1(double v) { return v; }
    static U set1u(std::uint64_t v) { return v; }
    static F add(F a, F b) { return a + b; }
    static F sub(F a, F b) { return a - b; }
    static F mul(F a, F b) { return a * b; }
    static F div(F a, F b) { return a / b; }
    static F sqrt(F a) { return __builtin_sqrt(a); }
    static F minf(F a, F b) { return a < b ? a : b; }
    static F maxf(F a, F b) { return a > b ? a : b; }
    static F round_ne(F a) { return __builtin_nearbyint(a); }
    static U cast_u(F a) { return __builtin_bit_cast(U, a); }
    static F cast_f(U a) { return __builtin_bit_cast(F, a); }
    static U bits_of(double v) { return __builtin_bit_cast(U, v); }
    static F bits_f(U v) { return __builtin_bit_cast(F, v); }
    static U uand(U a, U b) { return a & b; }
    static U uor(U a, U b) { return a | b; }
    static U uxor(U a, U b) { return a ^ b; }
    static U usub(U a, U b) { return a - b; }
    static U shl(U a, int n) { return a << n; }
    static U shr(U a, int n) { return a >> n; }
    static U cmp_gt(F a, F b) { return a > b ? ~0ull : 0ull; }
    static U cmp_equ(U a, U b) { return a == b ? ~0ull : 0ull; }
    static F sel(U mask, F a, F b) {
        return bits_f(uor(uand(mask, cast_u(a)),
                          uand(~mask, cast_u(b))));
    }
    static F sel_f(U mask, double a, double b) { return sel(mask, a, b); }
    static F fxor(F a, F b) { return bits_f(uxor(cast_u(a), cast_u(b))); }
};

}  // namespace expou::kern
