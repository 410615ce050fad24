#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlo/operators.hpp"
#include "tlo/symbol.hpp"
#include "tlo/symbol_calculus.hpp"

namespace tlo {

struct Interval {
    double lo;
    double hi;
};

/// Finite partition of the truncated G1 domain into pieces, each a finite
/// union of intervals.
class Partition {
public:
    /// Throws unless the pieces have positive measure, overlap only at
    /// endpoints and tile [domain.lower, domain.upper].
    Partition(const FiberDomain& domain, std::vector<std::vector<Interval>> pieces);
    /// Consecutive intervals between sorted cut points.
    static Partition split(const FiberDomain& domain, std::vector<double> cuts);

    const FiberDomain& domain() const noexcept { return domain_; }
    std::size_t size() const noexcept { return pieces_.size(); }
    const std::vector<Interval>& piece(std::size_t k) const { return pieces_.at(k); }
    /// Indicator of piece k.
    Profile indicator(std::size_t k) const;
    /// sum_k c_k chi_{Y_k}.
    SymbolSpec symbol(std::span<const cplx> coefficients) const;
    std::string describe() const;

private:
    FiberDomain domain_;
    std::vector<std::vector<Interval>> pieces_;
};

/// Indicator gamma-vectors (gamma_{chi_{Y_1}}(xi), ..., gamma_{chi_{Y_m}}(xi)).
struct NablaCloud {
    LineGrid grid;
    std::size_t m;
    std::vector<std::vector<double>> points;  // one m-vector per grid sample
    std::string partition;

    /// Largest violation of nonnegativity or of unit coordinate sum.
    double simplex_defect() const;
};

NablaCloud gamma_vector(const Atom& atom, const Partition& partition, const LineGrid& xi_grid,
                        const CalculusOptions& options);
NablaCloud gamma_vector(const Atom& atom, const Partition& partition, const LineGrid& xi_grid);

/// Hausdorff distance between two clouds in R^m.
double cloud_distance(const NablaCloud& a, const NablaCloud& b);

struct RefinementStep {
    std::size_t n;
    double distance;  // to the cloud on the doubled grid
};

/// Doubles the sampling density of operator_grid(kind, n, half_width)
/// starting from n0 until consecutive clouds are closer than `tolerance` or
/// n reaches max_n. Returns the history.
std::vector<RefinementStep> refine_cloud(const Atom& atom, const Partition& partition, double half_width,
                                         std::size_t n0, double tolerance, std::size_t max_n);

struct TauImage {
    std::vector<cplx> values;
    double norm = 0.0;  // sup over the cloud
};

/// Samples of a_1 z_1 + ... + a_m z_m over the cloud.
TauImage tau_evaluate(std::span<const cplx> coefficients, const NablaCloud& cloud);

struct CommutatorReport {
    double commutator = 0.0;  // ||[M1, M2]|| / (||M1|| ||M2||)
    GammaFunction semi_commutator;  // gamma_1 gamma_2 - gamma_{alpha_1 alpha_2}
    double semi_commutator_sup = 0.0;
};

CommutatorReport commutator_diagnostics(const Atom& atom, const Profile& alpha1, const Profile& alpha2,
                                        const LineGrid& xi_grid);

struct InvariantSubspaceReport {
    double commutator = 0.0;  // ||[P_S, M]||
    double relative = 0.0;    // divided by ||M||
    std::size_t dimension = 0;
};

/// Compares multiplication by the indicator of S (a finite union of
/// intervals of G2) with the direct matrix of T_alpha.
InvariantSubspaceReport invariant_subspace_check(const Atom& atom, const Profile& alpha,
                                                 std::span<const Interval> subset, const LineGrid& xi_grid);

/// Four first-variable symbols for commutator checks: indicator, Gaussian
/// bump, half-line (or long interval) and raised cosine.
std::vector<Profile> symbol_pool(AtomCase kind);

/// Three-piece partition used by the algebra checks: cuts at -1, 1 (windows)
/// or 1/2, 2 (wavelets).
Partition default_partition(AtomCase kind);

struct AlgebraCheck {
    std::string atom;
    std::size_t n = 0;
    double commutator_max = 0.0;  // over all pairs of the pool
    /// Windows: sup of the semi-commutator for the split at 0, expected 1/4.
    std::optional<double> semi_commutator_sup;
    double simplex_defect = 0.0;  // on the healthy band
    double tau_isometry_max = 0.0;  // over 5 random coefficient vectors
    bool pass = false;
};

/// Commutators over symbol_pool, the half-line semi-commutator (windows),
/// the simplex constraint and the tau isometry on default_partition, at the
/// operator grid of size n.
AlgebraCheck verify_algebra(const Atom& atom, std::size_t n, std::uint64_t seed);

}  // namespace tlo
