#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlo/atom.hpp"
#include "tlo/symbol.hpp"
#include "tlo/symbol_calculus.hpp"
#include "tlo/transforms.hpp"

namespace tlo {

enum class Builder { direct, multiplication, integral, pseudodiff };
std::string_view to_string(Builder builder);

/// Settings for the field pipeline behind build_direct.
struct OperatorOptions {
    FiberDomain domain;
    int fiber_order = 2;
    bool allow_large = false;

    static constexpr std::size_t max_default_size = 512;
    /// Default truncation with 512 base cells.
    static OperatorOptions defaults(AtomCase kind);
};

/// Galerkin matrix on the coordinate basis of a uniform G2 grid. With uniform
/// d(zeta_2) weights the adjoint is the plain conjugate transpose.
struct OperatorMatrix {
    LineGrid grid;
    RowMatrix values;
    Builder builder;
    std::string atom_name;
    std::string symbol;
};

/// Default operator grid on [-8, 8): centered for windows; shifted by half a
/// step for wavelets so no sample sits on xi = 0.
LineGrid operator_grid(AtomCase kind, std::size_t n, double half_width = 8.0);

/// The G2 grid extended by zeros to twice its length (same step).
LineGrid padded_grid(const LineGrid& xi_grid);
/// Grid of the symbol's second variable (v or p): the dual of padded_grid, so
/// kernel differences xi_i - xi_j never wrap around.
LineGrid symbol_grid(const LineGrid& xi_grid);

/// Column j is Q* U a U* Q e_j: embed, transform back to analysis
/// coordinates on symbol_grid, multiply by a(r, s), transform forward,
/// project onto the G2 grid.
OperatorMatrix build_direct(const Atom& atom, const SymbolSpec& symbol, const LineGrid& xi_grid,
                            const OperatorOptions& options);
OperatorMatrix build_direct(const Atom& atom, const SymbolSpec& symbol, const LineGrid& xi_grid);

/// diag(gamma(xi_i)).
OperatorMatrix build_multiplication(const GammaFunction& gamma);

/// b(xi_i, xi_j) beta^(+-(xi_i - xi_j)) d(xi), with the upper sign for
/// wavelets and the lower sign for windows; beta^ comes from `fourier` on
/// symbol_grid(xi_grid) and is interpolated linearly.
OperatorMatrix build_integral(const Atom& atom, const Profile& beta, const LineGrid& xi_grid,
                              const CalculusOptions& options);
OperatorMatrix build_integral(const Atom& atom, const Profile& beta, const LineGrid& xi_grid);

/// Compound symbol Gamma_alpha(x, y) beta(xi) with phase e^{-+2 pi i (x - y) xi},
/// one FFT per row.
OperatorMatrix build_pseudodiff(const Atom& atom, const Profile& alpha, const Profile& beta, const LineGrid& xi_grid,
                                const CalculusOptions& options);
OperatorMatrix build_pseudodiff(const Atom& atom, const Profile& alpha, const Profile& beta,
                                const LineGrid& xi_grid);

double operator_norm(const RowMatrix& m);
bool is_hermitian(const RowMatrix& m, double tolerance);
/// Largest |m(i, j) - conj(m(j, i))|.
double hermitian_defect(const RowMatrix& m);

/// Hausdorff distance between finite sets in the complex plane.
double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b);

struct SpectrumResult {
    std::vector<cplx> eigenvalues;  // ascending real part
    bool hermitian = false;
    bool converged = true;
    std::optional<double> hausdorff;
    std::string message;
};

/// Dense eigensolve; self-adjoint solver when the matrix is Hermitian within 1e-8.
SpectrumResult spectrum(const OperatorMatrix& m, std::optional<std::span<const cplx>> reference = std::nullopt);

enum class EquivalenceCase { cto1, cto2, cto3 };
std::string_view to_string(EquivalenceCase c);
EquivalenceCase parse_equivalence_case(std::string_view text);

struct EquivalenceSpec {
    EquivalenceCase which = EquivalenceCase::cto1;
    AtomCase kind = AtomCase::gabor;
    std::string atom = "gaussian";
    Profile alpha = Profile::constant(1.0);
    Profile beta = Profile::constant(1.0);
    std::size_t n = 256;
    std::uint64_t seed = 1;
    bool allow_large = false;
    std::optional<double> requested_tolerance;

    /// The requested tolerance if set, else 1e-3 for cto1 and 5e-3 otherwise.
    double tolerance() const;
};

struct VerificationReport {
    std::string case_name;
    std::string atom;
    std::string symbol;
    std::size_t n = 0;
    double norm_discrepancy = 0.0;
    double hausdorff = 0.0;
    double action_error_max = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string message;
};

/// Builds the direct matrix and the specialized one (multiplication,
/// integral or pseudodifferential), and compares norms, spectra and the
/// action on 10 seeded random vectors. Never throws on numerical failure;
/// the report carries pass = false and a message instead.
VerificationReport verify_equivalence(const EquivalenceSpec& spec);

/// T_a applied to a signal by the field pipeline: analyze, multiply by a,
/// bargmann, and (wavelets) an inverse Fourier transform back to the signal
/// grid. Rows of the field are streamed, so memory stays O(signal length).
SampledFunction apply_tlo_slow(const Atom& atom, const SymbolSpec& symbol, const SampledFunction& f,
                               const FiberGrid& g1);
SampledFunction apply_tlo_slow(const Atom& atom, const SymbolSpec& symbol, const SampledFunction& f);

/// Diagonalized path for first-variable symbols: multiply f^ by gamma
/// (wavelets) or f by gamma (windows). Throws for other symbol kinds.
SampledFunction apply_tlo_fast(const Atom& atom, const SymbolSpec& symbol, const SampledFunction& f);

struct FilterResult {
    SampledFunction slow;
    std::optional<SampledFunction> fast;
    double deviation = 0.0;  // ||fast - slow|| / ||slow|| when both ran
};

FilterResult apply_tlo_to_signal(const Atom& atom, const SymbolSpec& symbol, const SampledFunction& f,
                                 bool with_fast);

}  // namespace tlo
