#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace patrol {

// 64-bit finalizer used to derive child seeds from a parent seed plus indices.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt));
}

// FNV-1a, for salting seeds with string keys.
inline std::uint64_t hash_str(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

// Deterministic draws on top of mt19937_64. The standard pins that engine's
// output sequence, and the mappings below bypass the library distributions
// (whose algorithms are implementation-defined), so identical seeds give
// identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Modulo bias is ~n/2^64, irrelevant at the ranges used here.
    std::uint64_t next_below(std::uint64_t n) { return engine_() % n; }

    // Standard normal via Box-Muller; the sine partner is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        constexpr double two_pi = 6.283185307179586476925287;
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi * u2);
        has_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

    double exponential(double mean) { return -mean * std::log(1.0 - uniform01()); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace patrol
