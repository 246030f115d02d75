#include "expou/rng.hpp"

#include "kernels/vmath_inl.hpp"

namespace expou {

StreamCell stream_cell(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    philox::ctr_t c{static_cast<std::uint32_t>(step),
                    static_cast<std::uint32_t>(step >> 32),
                    static_cast<std::uint32_t>(path),
                    static_cast<std::uint32_t>(path >> 32)};
    philox::key_t k{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
    philox::ctr_t o = philox::philox4x32_10(c, k);
    return {o[0] | (static_cast<std::uint64_t>(o[1]) << 32),
            o[2] | (static_cast<std::uint64_t>(o[3]) << 32)};
}

double u64_to_uniform(std::uint64_t word) {
    return kern::uniform_from_u64<kern::SLane>(word);
}

std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t path,
                                      std::uint64_t step) {
    StreamCell cell = stream_cell(seed, path, step);
    double e1, e2;
    kern::box_muller<kern::SLane>(cell.u64a, cell.u64b, e1, e2);
    return {e1, e2};
}

}  // namespace expou
