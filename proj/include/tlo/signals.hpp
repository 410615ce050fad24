#pragma once

#include <cstdint>

#include "tlo/grid.hpp"

namespace tlo {

/// Unit-norm random signal on `grid` whose spectrum is supported on
/// lo <= |xi| <= hi, with independent complex normal coefficients. The grid
/// must be centered so its dual grid contains the requested band.
SampledFunction random_bandlimited(const LineGrid& grid, std::uint64_t seed, double lo = 0.25, double hi = 4.0);

/// Vector of independent complex normal entries (unnormalized).
SampledFunction random_vector(const LineGrid& grid, std::uint64_t seed);

/// Linear chirp e^{i pi rate x^2} under a Gaussian envelope of width `width`.
SampledFunction chirp(const LineGrid& grid, double rate, double width);

}  // namespace tlo
