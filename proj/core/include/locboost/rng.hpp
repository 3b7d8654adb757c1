#pragma once

#include <cstdint>

namespace locboost {

// splitmix64. Self-contained generator so that seeded runs reproduce
// bit-identically across platforms and standard libraries; the standard
// <random> distributions are implementation-defined and do not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw in [0, n) by rejection.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = ~0ULL - (~0ULL % n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Inclusive integer range.
    int next_int(int lo, int hi) {
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_real01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_real(double lo, double hi) {
        return lo + (hi - lo) * next_real01();
    }

    bool next_bool() { return (next_u64() & 1u) != 0; }

    // Independent child stream; used to key per-draw feature sampling and
    // per-image synthesis off one top-level seed.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        Rng r(seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace locboost
