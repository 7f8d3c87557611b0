#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sae {

/// Deterministic random stream for the simulator.
///
/// The engine is MT19937-64 exactly as specified by ISO C++ (seeded through
/// the standard single-value constructor), so any implementation of the
/// published algorithm reproduces the raw 64-bit stream. All variate
/// transforms are fixed here rather than delegated to implementation-defined
/// <random> distributions:
///   uniform01:      (next_u64() >> 11) * 2^-53, in [0, 1)
///   uniform_below:  rejection from the top of the 64-bit range
///   bernoulli(p):   uniform01() < p
///   exponential:    -log1p(-uniform01()), mean 1
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_below(std::uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    double exponential();

    /// Index drawn with probability weight[i] / sum(weight). Weights must be
    /// nonnegative with a positive sum.
    int categorical(const std::vector<double>& weights);

  private:
    std::mt19937_64 engine_;
};

/// Stream derivation for replicate/substream seeds: one splitmix64 scramble of
/// seed + (stream + 1) * golden gamma. Reproducible from the published
/// splitmix64 reference.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sae
