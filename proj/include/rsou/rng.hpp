#pragma once

#include <cstdint>

namespace rsou {

// Splittable random stream: xoshiro256++ seeded from (master_seed, stream_index)
// through splitmix64. Stream k of a batch yields the same sequence no matter
// which worker consumes it, so parallel path simulation stays reproducible.
//
// Samplers are hand-rolled (Box-Muller, inversion, Knuth product) rather than
// delegated to <random>: the standard distribution algorithms are
// implementation-defined, which would silently break the byte-for-byte
// determinism contract on a toolchain change.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0);

    std::uint64_t next_u64();

    double uniform01();     // [0, 1), 53-bit
    double uniform_pos();   // (0, 1], safe under log()
    double gaussian();      // standard normal
    double exponential(double rate);
    std::uint64_t poisson(double mean);

private:
    std::uint64_t s_[4];
    double cached_gaussian_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace rsou
