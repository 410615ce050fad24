#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlo/atom.hpp"
#include "tlo/symbol.hpp"
#include "tlo/transforms.hpp"

namespace tlo {

/// Quadrature settings for the scalar and kernel objects: composite Gauss
/// rule of `order` over `domain`, with cells split at fiber and symbol
/// breakpoints.
struct CalculusOptions {
    FiberDomain domain;
    int order = 8;

    /// Default truncation ([2^-8, 2^8] or [-16, 16]) with 128 base cells.
    static CalculusOptions defaults(AtomCase kind);
};

/// Where the truncated fiber norms stay within tolerance: lo <= |xi| <= hi
/// for wavelets, lo <= xi <= hi for windows. [2^-4, 4] and [-4, 4] at defaults.
std::pair<double, double> healthy_band(const FiberDomain& domain);
bool in_healthy_band(const FiberDomain& domain, double xi);

/// gamma(xi) = int alpha(r) |ell(r, xi)|^2 d(zeta_1)(r) sampled on a grid.
struct GammaFunction {
    LineGrid grid;
    std::vector<cplx> values;
    std::string atom_name;
    std::string symbol;
    /// Set when a sample overflowed the guard; such samples are stored as inf.
    bool overflow = false;
};

GammaFunction gamma_function(const Atom& atom, const Profile& alpha, const LineGrid& xi_grid,
                             const CalculusOptions& options);
GammaFunction gamma_function(const Atom& atom, const Profile& alpha, const LineGrid& xi_grid);

/// Window case only: gamma as the discrete convolution of alpha with |phi|^2
/// on a grid `oversample` times finer than xi_grid, computed with FFTs.
/// Accurate for smooth alpha.
GammaFunction gamma_convolution(const Atom& window, const Profile& alpha, const LineGrid& xi_grid,
                                int oversample = 4);

struct SpectrumReport {
    std::vector<cplx> values;
    bool real = false;
    double min = 0.0;  // real parts, when real
    double max = 0.0;
    double norm = 0.0;  // sup |gamma|
    bool bounded = true;
    std::string verdict;
};

/// Spectrum read off the sampled gamma. A symbol bound, when known, settles
/// boundedness; otherwise growth toward the edge of the sampled range
/// (sup exceeding the sup over the inner part by more than 10%) or an
/// overflow is reported as "unbounded on sampled range".
SpectrumReport spectrum_from_gamma(const GammaFunction& gamma, bool real_symbol,
                                   std::optional<double> symbol_bound = std::nullopt);

struct KernelMatrix {
    enum class Kind { overlap, compound };
    LineGrid grid;
    RowMatrix values;
    Kind kind;
    std::string atom_name;
    std::string symbol;
};

/// b(xi, omega) = int ell(r, omega) conj(ell(r, xi)) d(zeta_1)(r).
KernelMatrix overlap_kernel(const Atom& atom, const LineGrid& xi_grid, const CalculusOptions& options);
KernelMatrix overlap_kernel(const Atom& atom, const LineGrid& xi_grid);

/// Gamma(x, y) = int alpha(r) conj(ell(r, x)) ell(r, y) d(zeta_1)(r).
KernelMatrix compound_kernel(const Atom& atom, const Profile& alpha, const LineGrid& xi_grid,
                             const CalculusOptions& options);
KernelMatrix compound_kernel(const Atom& atom, const Profile& alpha, const LineGrid& xi_grid);

}  // namespace tlo
