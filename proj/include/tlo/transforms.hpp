#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "tlo/atom.hpp"
#include "tlo/grid.hpp"

namespace tlo {

using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Which side of U a field lives on. `analysis`: coordinates (z, v) or (z, p)
/// of W f. `fiber`: coordinates (z, omega) or (z, x) after U, where Q acts.
enum class FieldDomain { analysis, fiber };

enum class Direction { forward, backward };

/// Samples of F(z, s) over a G1 quadrature rule times a uniform G2 grid.
/// `partner` is the grid the second axis maps to under U (or U*).
struct PhasePlaneField {
    AtomCase kind;
    FieldDomain domain;
    FiberGrid g1;
    LineGrid g2;
    LineGrid partner;
    RowMatrix values;  // g1.size() x g2.count()

    static PhasePlaneField zeros(AtomCase kind, FieldDomain domain, FiberGrid g1, LineGrid g2, LineGrid partner);

    /// Norm in L2(G, d(zeta_1) x d(zeta_2)) by the grids' quadratures.
    double norm() const;
    cplx inner(const PhasePlaneField& other) const;
};

/// Default G1 rules for transforms: the midpoint rule of ScaleGrid::defaults()
/// for wavelets, 512 midpoints of [-16, 16] for windows.
FiberGrid default_fiber_grid(AtomCase kind);

/// Composite Gauss rule on the domain with cells split where ell(., omega)
/// is non-smooth for any of the listed omegas, plus the extra breakpoints.
FiberGrid fiber_rule(const Atom& atom, const FiberDomain& domain, std::span<const double> omegas,
                     std::span<const double> extra_breakpoints = {}, int order = 2);

/// Table of ell(z_k, omega_j), row-major over (G1 node, omega).
RowMatrix profile_table(const Atom& atom, const FiberGrid& g1, std::span<const double> omegas);

/// Quadrature of int |ell(z, omega_j)|^2 d(zeta_1) for each omega_j.
std::vector<double> fiber_norms(const Atom& atom, const FiberGrid& g1, std::span<const double> omegas);

/// W f sampled on g1 times the translation (wavelet, the signal grid) or
/// modulation (window, the dual grid) axis.
PhasePlaneField analyze(const Atom& atom, const SampledFunction& f, const FiberGrid& g1);

/// U = I (x) F for wavelets and I (x) F^{-1} for windows (forward maps
/// analysis to fiber coordinates); backward applies the inverse.
PhasePlaneField fiber_fourier(const PhasePlaneField& field, Direction direction);

/// (Q f)(z, omega) = f(omega) ell(z, omega). The partner grid defaults to f.grid.dual().
PhasePlaneField embed_fibers(const Atom& atom, const SampledFunction& f, const FiberGrid& g1);
PhasePlaneField embed_fibers(const Atom& atom, const SampledFunction& f, const FiberGrid& g1, const LineGrid& partner);

/// (Q* F)(omega) = int F(z, omega) conj(ell(z, omega)) d(zeta_1)(z); the field
/// must be in fiber coordinates.
SampledFunction project_fibers(const Atom& atom, const PhasePlaneField& field);

/// R = Q* U on a field in analysis coordinates.
SampledFunction bargmann(const Atom& atom, const PhasePlaneField& field);

/// R* = U* Q, returned in analysis coordinates.
PhasePlaneField bargmann_adjoint(const Atom& atom, const SampledFunction& f, const FiberGrid& g1);
PhasePlaneField bargmann_adjoint(const Atom& atom, const SampledFunction& f, const FiberGrid& g1,
                                 const LineGrid& partner);

struct TransformCheck {
    std::string atom;
    std::size_t n = 0;
    std::size_t signals = 0;
    double factorization_max = 0.0;  // relative L2 error of bargmann(analyze(f)) against f^ or f
    double isometry_max = 0.0;       // largest pairwise relative gap among ||f||, ||W f||, ||R W f||
    double tolerance = 2e-3;
    bool pass = false;
};

/// Runs the factorization and isometry checks on `signals` seeded
/// bandlimited signals on LineGrid::centered(8, n) at the default G1 grid.
TransformCheck verify_transforms(const Atom& atom, std::size_t n, std::uint64_t seed, std::size_t signals = 20,
                                 double tolerance = 2e-3);

}  // namespace tlo
