#include "tlo/signals.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tlo/fourier.hpp"

namespace tlo {

SampledFunction random_bandlimited(const LineGrid& grid, std::uint64_t seed, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("random_bandlimited: need 0 < lo < hi");
    const LineGrid freq = grid.dual();
    if (std::abs(freq.start()) < hi) throw std::invalid_argument("random_bandlimited: grid too coarse for band");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SampledFunction spectrum = SampledFunction::zeros(freq);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < freq.count(); ++k) {
        const double a = std::abs(freq.at(k));
        if (a < lo || a > hi) continue;
        const double re = normal(rng);
        const double im = normal(rng);
        spectrum.values[k] = {re, im};
        ++hits;
    }
    if (hits == 0) throw std::invalid_argument("random_bandlimited: band contains no frequency samples");
    SampledFunction f = fourier(spectrum, FourierSign::inverse, grid);
    const double n = f.norm();
    for (cplx& v : f.values) v /= n;
    return f;
}

SampledFunction random_vector(const LineGrid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SampledFunction f = SampledFunction::zeros(grid);
    for (cplx& v : f.values) {
        const double re = normal(rng);
        const double im = normal(rng);
        v = {re, im};
    }
    return f;
}

SampledFunction chirp(const LineGrid& grid, double rate, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("chirp: width must be positive");
    SampledFunction f = SampledFunction::zeros(grid);
    for (std::size_t j = 0; j < grid.count(); ++j) {
        const double x = grid.at(j);
        const double envelope = std::exp(-std::numbers::pi * (x / width) * (x / width));
        f.values[j] = envelope * unit_phase(0.5 * rate * x * x);
    }
    return f;
}

}  // namespace tlo
