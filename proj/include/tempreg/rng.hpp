#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace tempreg {

namespace detail {

// Finalizer from the splitmix64 generator; full-period bijective mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_label(std::string_view label) {
    // FNV-1a, folded through mix64 for avalanche.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(h);
}

}  // namespace detail

/**
 * Counter-based splittable random stream (splitmix64).
 *
 * Every consumer of randomness derives its own stream from a single root
 * seed via split(); streams never share state, so runs are reproducible
 * regardless of evaluation order or threading. Uniform and normal variates
 * are generated from raw 64-bit outputs (no std::*_distribution), keeping
 * sequences identical across standard libraries.
 */
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : base_(seed), counter_(0) {}

    std::uint64_t next_u64() { return detail::mix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    int uniform_int(int n) {
        return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                                 static_cast<unsigned __int128>(n)) >> 64);
    }

    /// Standard normal via Box-Muller. Stateless (no cached spare), two draws per call.
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Child stream independent of this one and of any other tag's child.
    RngStream split(std::uint64_t tag) const { return RngStream(detail::mix64(base_ ^ detail::mix64(tag))); }

    RngStream split(std::string_view label) const { return split(detail::hash_label(label)); }

    RngStream split(std::string_view label, std::uint64_t tag) const { return split(label).split(tag); }

private:
    std::uint64_t base_;
    std::uint64_t counter_;
};

}  // namespace tempreg
