#include "rsou/rng.hpp"

#include <cmath>

namespace rsou {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t base = mix64(mix64(master_seed) + kGolden * (stream_index + 1));
    for (int i = 0; i < 4; ++i) {
        base = mix64(base + kGolden);
        s_[i] = base;
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = kGolden;
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_gaussian_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = kTwoPi * uniform01();
    cached_gaussian_ = r * std::sin(phi);
    has_cached_ = true;
    return r * std::cos(phi);
}

double RngStream::exponential(double rate) {
    return -std::log(uniform_pos()) / rate;
}

std::uint64_t RngStream::poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    // Knuth product method, chunked so the loop stays short for large means.
    std::uint64_t total = 0;
    std::uint64_t chunks = static_cast<std::uint64_t>(mean / 30.0) + 1;
    const double chunk_mean = mean / static_cast<double>(chunks);
    const double limit = std::exp(-chunk_mean);
    for (std::uint64_t c = 0; c < chunks; ++c) {
        double p = 1.0;
        std::uint64_t k = 0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        total += k - 1;
    }
    return total;
}

}  // namespace rsou
