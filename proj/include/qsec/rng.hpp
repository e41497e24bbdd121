#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace qsec {

// Hand-rolled generator + distributions so that every output stream is
// bit-identical across platforms and standard-library versions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so that nearby seeds decorrelate
        splitmix64(state_);
        splitmix64(state_);
    }

    /// Independent stream for (seed, index) pairs; used for per-point / per-trajectory seeding.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        splitmix64(s);
        return Rng(s);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller; caches the second deviate.
    double normal() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi_ * u2);
        return r * std::cos(two_pi_ * u2);
    }

    /// Poisson by inversion; fine for the photon-count means used here (< ~700).
    std::uint64_t poisson(double mean) {
        double l = std::exp(-mean);
        double p = 1.0;
        std::uint64_t k = 0;
        do {
            ++k;
            p *= uniform();
        } while (p > l);
        return k - 1;
    }

  private:
    static constexpr double two_pi_ = 6.283185307179586476925286766559;
    std::uint64_t state_;
    std::optional<double> spare_;
};

}  // namespace qsec
