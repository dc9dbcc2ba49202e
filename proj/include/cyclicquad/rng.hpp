#pragma once

// Deterministic random sampling. Only the raw mt19937_64 stream is consumed
// (its output is pinned by the standard); the mappings to doubles are our
// own, so identical seeds give identical samples on every platform.

#include <cmath>
#include <cstdint>
#include <random>

namespace cyclicquad {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace cyclicquad
