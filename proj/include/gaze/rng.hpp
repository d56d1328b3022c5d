#pragma once

// Portable, seedable random source.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard
// (and matches numpy's MT19937-64 / the reference implementation). The draws
// below are defined here rather than taken from <random> distributions, whose
// algorithms are implementation-defined:
//   uniform()  = (next() >> 11) * 2^-53                  in [0, 1)
//   normal()   = Box-Muller cosine branch, u1 = 1 - uniform(), u2 = uniform()
//   poisson(m) = number of unit-rate exponential arrivals with sum <= m
//
// Sub-seeds for independent trials come from SplitMix64 over (seed, indices).

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gaze {

std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a master seed with a list of indices into a trial seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    double normal(double mean, double sigma) { return mean + sigma * normal(); }
    bool bernoulli(double p) { return uniform() < p; }
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
};

}  // namespace gaze
