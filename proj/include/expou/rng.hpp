#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace expou {

// Philox4x32-10 counter-based generator. A 128-bit counter and 64-bit key
// produce four 32-bit words per invocation; the mapping is stateless, so any
// (seed, path, step) cell of the stream can be generated independently and
// in any order. This is what makes the simulation reproducible regardless of
// how paths are scheduled across threads.
namespace philox {

inline constexpr std::uint32_t M0 = 0xD2511F53u;
inline constexpr std::uint32_t M1 = 0xCD9E8D57u;
inline constexpr std::uint32_t W0 = 0x9E3779B9u;
inline constexpr std::uint32_t W1 = 0xBB67AE85u;

using ctr_t = std::array<std::uint32_t, 4>;
using key_t = std::array<std::uint32_t, 2>;

inline ctr_t round_once(const ctr_t& x, const key_t& k) {
    std::uint64_t p0 = static_cast<std::uint64_t>(M0) * x[0];
    std::uint64_t p2 = static_cast<std::uint64_t>(M1) * x[2];
    return {static_cast<std::uint32_t>(p2 >> 32) ^ x[1] ^ k[0],
            static_cast<std::uint32_t>(p2),
            static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k[1],
            static_cast<std::uint32_t>(p0)};
}

inline ctr_t philox4x32_10(ctr_t x, key_t k) {
    for (int r = 0; r < 10; ++r) {
        x = round_once(x, k);
        k[0] += W0;
        k[1] += W1;
    }
    return x;
}

}  // namespace philox

// Stream cell addressing: key = seed, counter = (step, path). One invocation
// yields two 64-bit words, i.e. one (u1, u2) uniform pair, i.e. one standard
// normal pair per path per step.
struct StreamCell {
    std::uint64_t u64a, u64b;
};

StreamCell stream_cell(std::uint64_t seed, std::uint64_t path, std::uint64_t step);

// Uniform in (0, 1): ((word >> 12) + 1/2) * 2^-52. Never 0 or 1, symmetric,
// and exactly representable so the scalar and SIMD paths agree bitwise.
double u64_to_uniform(std::uint64_t word);

// Box-Muller pair for (seed, path, step); eps1 drives the price shock, eps2
// the independent component of the volatility shock.
std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t path,
                                      std::uint64_t step);

// Step index reserved for initial-state draws (per-path stationary Y0); never
// reached by time stepping.
inline constexpr std::uint64_t init_draw_step = ~std::uint64_t{0};

// Facade over the (seed, path) sub-stream.
class PathStream {
public:
    PathStream(std::uint64_t seed, std::uint64_t path) : seed_(seed), path_(path) {}
    std::pair<double, double> normals(std::uint64_t step) const {
        return normal_pair(seed_, path_, step);
    }
    double uniform(std::uint64_t step) const {
        return u64_to_uniform(stream_cell(seed_, path_, step).u64a);
    }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t path() const { return path_; }
private:
    std::uint64_t seed_, path_;
};

inline PathStream per_path_stream(std::uint64_t seed, std::uint64_t path) {
    return PathStream(seed, path);
}

}  // namespace expou
