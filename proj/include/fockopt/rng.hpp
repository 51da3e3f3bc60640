#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fockopt {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Seeded generator with platform-stable draws. The std distribution adaptors
// are implementation-defined, so uniform/normal are rolled by hand here and
// all reproducibility contracts rest on this class.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

    std::uint64_t raw() { return gen_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = (UINT64_MAX / range) * range;
        std::uint64_t u = raw();
        while (u >= limit) u = raw();
        return lo + static_cast<int>(u % range);
    }

    // Box-Muller without spare caching so the draw count is predictable.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Independent child stream derived from the construction seed, so task
    // k's stream does not depend on how much the parent has drawn.
    Rng split(std::uint64_t stream) const {
        return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x51ed2701)));
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace fockopt
