#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <utility>
#include <vector>

namespace simkern {

// splitmix64 finalizer; the workhorse for all deterministic draws.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_str(std::string_view s) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Keyed derivation so independent streams never collide: each tag folds
// into the key through the mixer.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t tag : path) h = mix64(h ^ mix64(tag));
    return h;
}

// Counter-based generator: output c is a pure function of (key, c), so a
// stream can be replayed or forked without shared state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix64(seed)) {}

    static Rng from_path(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        return Rng(derive_seed(seed, path));
    }

    std::uint64_t next_u64() { return mix64(key_ ^ (0x9e3779b97f4a7c15ULL * ++counter_)); }

    // [0,1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // inclusive on both ends
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    double gauss(double mean, double stdev) {
        // Box-Muller; u1 kept away from 0.
        double u1 = 1.0 - next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stdev * r * std::cos(2.0 * M_PI * u2);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    bool bernoulli(double p) { return next_unit() < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace simkern
