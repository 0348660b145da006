#pragma once

#include <cstdint>
#include <random>

namespace hipmlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seedable, splittable generator. Substreams are derived from (seed, index)
// only, so substream(i) is stable no matter how much the parent stream has
// been consumed. Uniform doubles are built from the raw 64-bit output instead
// of std::uniform_real_distribution, which keeps sequences identical across
// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe to feed into log().
    double uniform_pos() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Index in {0, ..., n-1}. Modulo bias is ~n/2^64, irrelevant here.
    std::uint64_t uniform_index(std::uint64_t n) { return gen_() % n; }

    // Independent substream keyed by (seed, index).
    Rng substream(std::uint64_t index) const {
        return Rng(splitmix64(seed_ ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
    }

    // Fresh generator keyed by the next draw; advances this stream, so
    // repeated forks are independent of each other.
    Rng fork() { return Rng(next_u64()); }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

// Stable per-task seed for experiment harnesses: hash of (seed, tag, a, b).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ tag);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    return h;
}

}  // namespace hipmlab
