#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <set>

#include "expou/rng.hpp"

using namespace expou;

// Reference vectors from the Random123 distribution (kat_vectors, the
// philox4x32x10 rows).
TEST_CASE("philox4x32-10 known answers") {
    using philox::ctr_t;
    using philox::key_t;

    ctr_t r0 = philox::philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(r0[0] == 0x6627e8d5u);
    CHECK(r0[1] == 0xe169c58du);
    CHECK(r0[2] == 0xbc57ac4cu);
    CHECK(r0[3] == 0x9b00dbd8u);

    ctr_t rf = philox::philox4x32_10(
        {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
        {0xffffffffu, 0xffffffffu});
    CHECK(rf[0] == 0x408f276du);
    CHECK(rf[1] == 0x41c83b0eu);
    CHECK(rf[2] == 0xa20bc7c6u);
    CHECK(rf[3] == 0x6d5451fdu);

    ctr_t rp = philox::philox4x32_10(
        {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
        {0xa4093822u, 0x299f31d0u});
    CHECK(rp[0] == 0xd16cfe09u);
    CHECK(rp[1] == 0x94fdccebu);
    CHECK(rp[2] == 0x5001e420u);
    CHECK(rp[3] == 0x24126ea1u);
}

TEST_CASE("stream cells are deterministic and distinct") {
    StreamCell a = stream_cell(42, 7, 1000);
    StreamCell b = stream_cell(42, 7, 1000);
    CHECK(a.u64a == b.u64a);
    CHECK(a.u64b == b.u64b);

    std::set<std::uint64_t> words;
    for (std::uint64_t seed : {std::uint64_t{0}, std::uint64_t{1},
                               std::uint64_t{42}})
        for (std::uint64_t path : {std::uint64_t{0}, std::uint64_t{1},
                                   std::uint64_t{999}})
            for (std::uint64_t step :
                 {std::uint64_t{0}, std::uint64_t{5}, init_draw_step}) {
                StreamCell c = stream_cell(seed, path, step);
                words.insert(c.u64a);
                words.insert(c.u64b);
            }
    CHECK(words.size() == 2 * 27);
}

TEST_CASE("uniform conversion uses the top 52 bits, offset by half") {
    CHECK(u64_to_uniform(0) == 0.5 * std::pow(2.0, -52));
    CHECK(u64_to_uniform(~std::uint64_t{0}) ==
          (std::pow(2.0, 52) - 0.5) * std::pow(2.0, -52));
    // Low 12 bits must not matter.
    CHECK(u64_to_uniform(0xfffu) == u64_to_uniform(0));
    std::uint64_t w = 0x0123456789abcdefull;
    CHECK(u64_to_uniform(w) ==
          ((w >> 12) + 0.5) * std::pow(2.0, -52));
    CHECK(u64_to_uniform(w) > 0.0);
    CHECK(u64_to_uniform(w) < 1.0);
}

TEST_CASE("normal pairs have the right gross statistics") {
    const int n = 200000;
    double sum = 0, sum2 = 0, cross = 0;
    for (int i = 0; i < n; ++i) {
        auto [e1, e2] = normal_pair(123, i, 0);
        CHECK(std::isfinite(e1));
        CHECK(std::isfinite(e2));
        sum += e1 + e2;
        sum2 += e1 * e1 + e2 * e2;
        cross += e1 * e2;
    }
    double mean = sum / (2 * n);
    double var = sum2 / (2 * n) - mean * mean;
    // ~4 standard errors at this sample size.
    CHECK(std::abs(mean) < 4.0 / std::sqrt(2.0 * n));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / (2.0 * n)));
    CHECK(std::abs(cross / n) < 4.0 / std::sqrt(1.0 * n));
}

TEST_CASE("path stream facade addresses the same cells") {
    PathStream ps = per_path_stream(9, 12);
    auto [a1, a2] = ps.normals(34);
    auto [b1, b2] = normal_pair(9, 12, 34);
    CHECK(a1 == b1);
    CHECK(a2 == b2);
    CHECK(ps.uniform(5) == u64_to_uniform(stream_cell(9, 12, 5).u64a));
}
