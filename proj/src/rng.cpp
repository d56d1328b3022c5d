#include "gaze/rng.hpp"

#include <cmath>

#include "gaze/core.hpp"

namespace gaze {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices) {
    std::uint64_t h = splitmix64(master);
    for (auto i : indices) h = splitmix64(h ^ splitmix64(i + 0x632BE59BD9B4E019ULL));
    return h;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0)) throw InvalidArgument("poisson: mean must be >= 0");
    std::uint64_t count = 0;
    double sum = 0.0;
    for (;;) {
        sum += -std::log(1.0 - uniform());
        if (sum > mean) return count;
        ++count;
    }
}

}  // namespace gaze
