#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <vector>

namespace flowgnn {

/// Deterministic 64-bit generator (splitmix64). Distribution sampling is
/// implemented by hand so streams never depend on the standard library's
/// unspecified distribution algorithms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::uint64_t uniform_index(std::uint64_t lo, std::uint64_t hi) {
        // Modulo bias is negligible for the ranges used here (<< 2^32).
        return lo + next_u64() % (hi - lo + 1);
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(0, i - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Decorrelated child seed, e.g. one stream per dataset sample.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
        Rng r(master ^ (0x5851f42d4c957f2dULL * (index + 1)));
        r.next_u64();
        return r.next_u64();
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace flowgnn
