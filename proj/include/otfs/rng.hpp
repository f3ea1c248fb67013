#pragma once

#include <array>
#include <cstdint>

#include "otfs/common.hpp"

namespace otfs {

/**
 * Counter-based random number generator (Philox4x32-10).
 *
 * Output is a pure function of (seed, stream, counter), so any realization,
 * batch or worker can be given its own independent substream and the whole
 * run replays bit-identically on every platform. Integer-only core; floating
 * point enters only in the uniform/gaussian conversions below.
 *
 * Layout per 128-bit block:
 *   key     = (seed_lo32, seed_hi32)
 *   counter = (block_lo32, block_hi32, stream_lo32, stream_hi32)
 *
 * Gaussian variates use Box-Muller on 53-bit uniforms (one cached spare).
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform double in [0, 1), 53 random bits.
    double uniform();
    // Uniform double in [lo, hi).
    double uniform(double lo, double hi);
    // Standard normal N(0, 1).
    double gaussian();
    // Circularly symmetric complex Gaussian CN(0, variance):
    // real and imaginary parts are independent N(0, variance / 2).
    cplx circular_gaussian(double variance);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int avail_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Substream purposes used across the toolkit; a stream id is
// (purpose << 56) | index so independent uses never collide.
enum class StreamPurpose : std::uint64_t {
    kDataset = 1,
    kWeightInitReal = 2,
    kWeightInitImag = 3,
    kShuffleReal = 4,
    kShuffleImag = 5,
    kLatencyPairs = 6,
    kSweep = 7,
    kGeneric = 15,
};

inline std::uint64_t make_stream(StreamPurpose purpose, std::uint64_t index = 0) {
    return (static_cast<std::uint64_t>(purpose) << 56) | (index & 0x00FFFFFFFFFFFFFFull);
}

}  // namespace otfs
