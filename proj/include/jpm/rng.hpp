// rng.hpp — seeded, platform-stable random numbers
//
// The generator contract: SplitMix64, a 64-bit counter hashed through a fixed
// bijective finalizer.  Identical seeds give bit-identical streams on every
// platform, which is what the determinism guarantees of the sampling code and
// the CLI rest on.  Batch work derives one substream per sample index, so a
// batch may be partitioned arbitrarily without changing any sample.

#pragma once

#include <cmath>
#include <cstdint>

namespace jpm {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform on (0,1]; never 0, so log() is safe
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // standard normal, Box-Muller; consumes two uniforms per draw
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

  private:
    std::uint64_t state_;
};

// Seed of the index-th substream of a master seed.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace jpm
