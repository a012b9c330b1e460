#pragma once

#include <cstdint>

namespace sawsum {

// sawmix128-v1: a keyed 4x64 -> 2x64 mixing function (wyhash-style multiply
// folding). Every random quantity in the library is a pure function of a
// (seed, coordinates, tag, counter) tuple pushed through this mixer, so
// environments are replayable from a single seed with O(1) memory and any
// query order.

namespace detail {
inline std::uint64_t mum(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
    return static_cast<std::uint64_t>(r) ^ static_cast<std::uint64_t>(r >> 64);
}
}  // namespace detail

struct U128 {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;
};

inline U128 sawmix128(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2, std::uint64_t k3) {
    using detail::mum;
    const std::uint64_t a = mum(k0 ^ 0xa0761d6478bd642fULL, k1 ^ 0xe7037ed1a0b428dbULL);
    const std::uint64_t b = mum(k2 ^ 0x8ebc6af09c88c6e3ULL, k3 ^ 0x589965cc75374cc3ULL);
    U128 out;
    out.hi = mum(a ^ 0x1d8e4e27c47d124fULL, b ^ 0xeb44accab455d165ULL);
    out.lo = mum(b + 0x2d358dccaa6c78a5ULL, a + 0x8bb84b93962eacc9ULL);
    return out;
}

inline double u01_from_bits(std::uint64_t bits) {
    // 53-bit mantissa in [0,1)
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// A counter-based stream of uniforms keyed by three 64-bit words. Streams
// with distinct keys are independent; a stream replays identically from its
// key regardless of what other streams were consumed in between.
class RandomStream {
public:
    RandomStream() = default;
    RandomStream(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2)
        : k0_(k0), k1_(k1), k2_(k2) {}

    std::uint64_t next_u64() { return sawmix128(k0_, k1_, k2_, ctr_++).hi; }
    double next_u01() { return u01_from_bits(next_u64()); }
    bool next_bernoulli(double p) { return next_u01() < p; }

    // Child stream with an independent key, useful for nested consumers.
    RandomStream fork(std::uint64_t salt) {
        const U128 m = sawmix128(k0_, k1_, k2_ ^ 0xf0e1d2c3b4a59687ULL, salt);
        return RandomStream(m.hi, m.lo, salt);
    }

private:
    std::uint64_t k0_ = 0, k1_ = 0, k2_ = 0;
    std::uint64_t ctr_ = 0;
};

}  // namespace sawsum
