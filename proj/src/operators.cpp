#include "tlo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "tlo/fourier.hpp"
#include "tlo/signals.hpp"

namespace tlo {

namespace {

FourierSign forward_sign(AtomCase kind) {
    return kind == AtomCase::wavelet ? FourierSign::forward : FourierSign::inverse;
}

FourierSign backward_sign(AtomCase kind) {
    return kind == AtomCase::wavelet ? FourierSign::inverse : FourierSign::forward;
}

void check_size(std::size_t n, bool allow_large) {
    if (n > OperatorOptions::max_default_size && !allow_large)
        throw std::invalid_argument("operator grid of " + std::to_string(n) + " points exceeds " +
                                    std::to_string(OperatorOptions::max_default_size) +
                                    " (pass allow_large to override)");
}

void check_finite(cplx v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error(std::string(what) + " is not finite on the grid");
}

// a(z_k, s_m) for all G1 nodes and symbol-grid points, with shortcuts for the
// factorized kinds.
RowMatrix symbol_table(const SymbolSpec& symbol, const FiberGrid& g1, const LineGrid& s_grid) {
    const auto rows = static_cast<Eigen::Index>(g1.size());
    const auto cols = static_cast<Eigen::Index>(s_grid.count());
    RowMatrix table(rows, cols);
    if (symbol.kind == SymbolSpec::Kind::general) {
        for (Eigen::Index k = 0; k < rows; ++k)
            for (Eigen::Index m = 0; m < cols; ++m) {
                const cplx v = symbol(g1.nodes[k], s_grid.at(m));
                check_finite(v, "symbol");
                table(k, m) = v;
            }
        return table;
    }
    Eigen::VectorXcd first = Eigen::VectorXcd::Ones(rows);
    Eigen::RowVectorXcd second = Eigen::RowVectorXcd::Ones(cols);
    if (symbol.depends_on_first())
        for (Eigen::Index k = 0; k < rows; ++k) {
            first[k] = symbol.alpha(g1.nodes[k]);
            check_finite(first[k], "symbol");
        }
    if (symbol.depends_on_second())
        for (Eigen::Index m = 0; m < cols; ++m) {
            second[m] = symbol.beta(s_grid.at(m));
            check_finite(second[m], "symbol");
        }
    table = first * second;
    return table;
}

}  // namespace

std::string_view to_string(Builder builder) {
    switch (builder) {
        case Builder::direct: return "direct";
        case Builder::multiplication: return "multiplication";
        case Builder::integral: return "integral";
        case Builder::pseudodiff: return "pseudodiff";
    }
    return "direct";
}

OperatorOptions OperatorOptions::defaults(AtomCase kind) {
    return {FiberDomain::defaults(kind), 2, false};
}

LineGrid operator_grid(AtomCase kind, std::size_t n, double half_width) {
    if (kind == AtomCase::gabor) return LineGrid::centered(half_width, n);
    return LineGrid::midpoints(-half_width, half_width, n);
}

LineGrid padded_grid(const LineGrid& xi_grid) {
    const std::size_t n = xi_grid.count();
    return {xi_grid.start() - static_cast<double>(n / 2) * xi_grid.step(), xi_grid.step(), 2 * n};
}

LineGrid symbol_grid(const LineGrid& xi_grid) { return padded_grid(xi_grid).dual(); }

OperatorMatrix build_direct(const Atom& atom, const SymbolSpec& symbol, const LineGrid& xi_grid,
                            const OperatorOptions& options) {
    check_size(xi_grid.count(), options.allow_large);
    const AtomCase kind = atom.kind();
    const auto omegas = xi_grid.points();
    const auto breaks = symbol.first_breakpoints();
    const FiberGrid g1 = fiber_rule(atom, options.domain, omegas, breaks, options.fiber_order);
    const LineGrid padded = padded_grid(xi_grid);
    const LineGrid s_grid = padded.dual();
    const RowMatrix ell = profile_table(atom, g1, omegas);
    const RowMatrix a = symbol_table(symbol, g1, s_grid);
    const LineTransform to_analysis(padded, s_grid, backward_sign(kind));
    const LineTransform to_fiber(s_grid, padded, forward_sign(kind));

    const std::size_t n = xi_grid.count();
    const std::size_t offset = n / 2;
    OperatorMatrix out{xi_grid, RowMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                       Builder::direct, atom.name(), symbol.descriptor};
    std::vector<cplx> row(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < g1.size(); ++k) {
            const cplx lkj = ell(k, j);
            if (lkj == 0.0) continue;
            // (Q e_j)(z_k, .) is ell(z_k, xi_j) at xi_j and zero elsewhere.
            std::fill(row.begin(), row.end(), cplx{0.0, 0.0});
            row[offset + j] = lkj;
            to_analysis.apply(row);
            for (std::size_t m = 0; m < row.size(); ++m) row[m] *= a(k, m);
            to_fiber.apply(row);
            const double w = g1.weights[k];
            for (std::size_t i = 0; i < n; ++i) out.values(i, j) += w * std::conj(ell(k, i)) * row[offset + i];
        }
    }
    return out;
}

OperatorMatrix build_direct(const Atom& atom, const SymbolSpec& symbol, const LineGrid& xi_grid) {
    return build_direct(atom, symbol, xi_grid, OperatorOptions::defaults(atom.kind()));
}

OperatorMatrix build_multiplication(const GammaFunction& gamma) {
    const auto n = static_cast<Eigen::Index>(gamma.values.size());
    OperatorMatrix out{gamma.grid, RowMatrix::Zero(n, n), Builder::multiplication, gamma.atom_name, gamma.symbol};
    for (Eigen::Index i = 0; i < n; ++i) out.values(i, i) = gamma.values[i];
    return out;
}

OperatorMatrix build_integral(const Atom& atom, const Profile& beta, const LineGrid& xi_grid,
                              const CalculusOptions& options) {
    const LineGrid s_grid = symbol_grid(xi_grid);
    SampledFunction beta_samples = SampledFunction::zeros(s_grid);
    for (std::size_t m = 0; m < s_grid.count(); ++m) beta_samples.values[m] = beta(s_grid.at(m));
    const SampledFunction beta_hat = fourier(beta_samples, FourierSign::forward);
    const KernelMatrix b = overlap_kernel(atom, xi_grid, options);
    const double sign = atom.kind() == AtomCase::wavelet ? 1.0 : -1.0;
    const auto n = static_cast<Eigen::Index>(xi_grid.count());
    OperatorMatrix out{xi_grid, RowMatrix(n, n), Builder::integral, atom.name(), "second(" + beta.describe() + ")"};
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double diff = static_cast<double>(i - j) * xi_grid.step();
            out.values(i, j) = b.values(i, j) * beta_hat.interpolate(sign * diff) * xi_grid.step();
        }
    return out;
}

OperatorMatrix build_integral(const Atom& atom, const Profile& beta, const LineGrid& xi_grid) {
    return build_integral(atom, beta, xi_grid, CalculusOptions::defaults(atom.kind()));
}

OperatorMatrix build_pseudodiff(const Atom& atom, const Profile& alpha, const Profile& beta, const LineGrid& xi_grid,
                                const CalculusOptions& options) {
    const KernelMatrix gamma = compound_kernel(atom, alpha, xi_grid, options);
    const LineGrid padded = padded_grid(xi_grid);
    const LineGrid s_grid = padded.dual();
    // Upper sign e^{-2 pi i (x - y) xi}: the y-sum carries e^{+2 pi i y xi}.
    const bool upper = atom.kind() == AtomCase::wavelet;
    const LineTransform over_xi(s_grid, padded, upper ? FourierSign::inverse : FourierSign::forward);
    const double outer = upper ? -1.0 : 1.0;
    const std::size_t n = xi_grid.count();
    const std::size_t offset = n / 2;
    std::vector<cplx> beta_values(s_grid.count());
    for (std::size_t m = 0; m < beta_values.size(); ++m) beta_values[m] = beta(s_grid.at(m));

    OperatorMatrix out{xi_grid, RowMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                       Builder::pseudodiff, atom.name(),
                       "separable(" + alpha.describe() + ";" + beta.describe() + ")"};
    std::vector<cplx> row(s_grid.count());
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xi_grid.at(i);
        for (std::size_t m = 0; m < row.size(); ++m) row[m] = beta_values[m] * unit_phase(outer * x * s_grid.at(m));
        over_xi.apply(row);
        for (std::size_t j = 0; j < n; ++j)
            out.values(i, j) = gamma.values(i, j) * row[offset + j] * xi_grid.step();
    }
    return out;
}

OperatorMatrix build_pseudodiff(const Atom& atom, const Profile& alpha, const Profile& beta,
                                const LineGrid& xi_grid) {
    return build_pseudodiff(atom, alpha, beta, xi_grid, CalculusOptions::defaults(atom.kind()));
}

double operator_norm(const RowMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double hermitian_defect(const RowMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const RowMatrix& m, double tolerance) {
    return m.rows() == m.cols() && hermitian_defect(m) <= tolerance;
}

double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.empty() || b.empty()) {
        if (a.empty() && b.empty()) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    auto directed = [](std::span<const cplx> from, std::span<const cplx> to) {
        double worst = 0.0;
        for (const cplx& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const cplx& q : to) best = std::min(best, std::norm(p - q));
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(directed(a, b), directed(b, a));
}

SpectrumResult spectrum(const OperatorMatrix& m, std::optional<std::span<const cplx>> reference) {
    SpectrumResult result;
    const Eigen::MatrixXcd dense = m.values;
    result.hermitian = is_hermitian(m.values, 1e-8);
    if (result.hermitian) {
        const Eigen::MatrixXcd sym = 0.5 * (dense + dense.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
        result.converged = solver.info() == Eigen::Success;
        if (result.converged)
            for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
                result.eigenvalues.emplace_back(solver.eigenvalues()(i), 0.0);
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense, false);
        result.converged = solver.info() == Eigen::Success;
        if (result.converged)
            for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
                result.eigenvalues.push_back(solver.eigenvalues()(i));
    }
    if (!result.converged) {
        result.message = "eigensolver did not converge";
        return result;
    }
    std::sort(result.eigenvalues.begin(), result.eigenvalues.end(), [](const cplx& x, const cplx& y) {
        return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
    });
    if (reference) result.hausdorff = hausdorff_distance(result.eigenvalues, *reference);
    return result;
}

std::string_view to_string(EquivalenceCase c) {
    switch (c) {
        case EquivalenceCase::cto1: return "cto1";
        case EquivalenceCase::cto2: return "cto2";
        case EquivalenceCase::cto3: return "cto3";
    }
    return "cto1";
}

EquivalenceCase parse_equivalence_case(std::string_view text) {
    if (text == "cto1") return EquivalenceCase::cto1;
    if (text == "cto2") return EquivalenceCase::cto2;
    if (text == "cto3") return EquivalenceCase::cto3;
    throw std::invalid_argument("unknown equivalence case '" + std::string(text) + "'");
}

double EquivalenceSpec::tolerance() const {
    if (requested_tolerance) return *requested_tolerance;
    return which == EquivalenceCase::cto1 ? 1e-3 : 5e-3;
}

VerificationReport verify_equivalence(const EquivalenceSpec& spec) {
    VerificationReport report;
    report.case_name = std::string(to_string(spec.which));
    report.atom = spec.atom;
    report.n = spec.n;
    report.tolerance = spec.tolerance();
    switch (spec.which) {
        case EquivalenceCase::cto1: report.symbol = spec.alpha.describe(); break;
        case EquivalenceCase::cto2: report.symbol = spec.beta.describe(); break;
        case EquivalenceCase::cto3: report.symbol = spec.alpha.describe() + ";" + spec.beta.describe(); break;
    }
    try {
        const Atom atom = make_atom(spec.kind, spec.atom);
        const LineGrid grid = operator_grid(spec.kind, spec.n);
        OperatorOptions options = OperatorOptions::defaults(spec.kind);
        options.allow_large = spec.allow_large;

        OperatorMatrix direct{grid, {}, Builder::direct, {}, {}};
        OperatorMatrix special{grid, {}, Builder::direct, {}, {}};
        switch (spec.which) {
            case EquivalenceCase::cto1:
                direct = build_direct(atom, SymbolSpec::first(spec.alpha), grid, options);
                special = build_multiplication(gamma_function(atom, spec.alpha, grid));
                break;
            case EquivalenceCase::cto2:
                direct = build_direct(atom, SymbolSpec::second(spec.beta), grid, options);
                special = build_integral(atom, spec.beta, grid);
                break;
            case EquivalenceCase::cto3:
                direct = build_direct(atom, SymbolSpec::separable(spec.alpha, spec.beta), grid, options);
                special = build_pseudodiff(atom, spec.alpha, spec.beta, grid);
                break;
        }
        const double scale = operator_norm(direct.values);
        const double diff = operator_norm(direct.values - special.values);
        report.norm_discrepancy = scale > 0.0 ? diff / scale : diff;

        const auto s_direct = spectrum(direct);
        const auto s_special = spectrum(special);
        if (!s_direct.converged || !s_special.converged) throw std::runtime_error("eigensolver did not converge");
        const double h = hausdorff_distance(s_direct.eigenvalues, s_special.eigenvalues);
        report.hausdorff = scale > 0.0 ? h / scale : h;

        for (std::uint64_t t = 0; t < 10; ++t) {
            const SampledFunction x = random_vector(grid, spec.seed * 1000003ULL + t);
            const Eigen::Map<const Eigen::VectorXcd> v(x.values.data(), static_cast<Eigen::Index>(x.values.size()));
            const Eigen::VectorXcd a = direct.values * v;
            const Eigen::VectorXcd b = special.values * v;
            const double denom = a.norm();
            const double err = denom > 0.0 ? (a - b).norm() / denom : (a - b).norm();
            report.action_error_max = std::max(report.action_error_max, err);
        }
        report.pass = report.norm_discrepancy <= report.tolerance && report.hausdorff <= report.tolerance &&
                      report.action_error_max <= report.tolerance;
        if (!report.pass) report.message = "discrepancy above tolerance";
    } catch (const std::exception& e) {
        report.pass = false;
        report.message = e.what();
    }
    return report;
}

// ---------------------------------------------------------------------------
// Signals

SampledFunction apply_tlo_slow(const Atom& atom, const SymbolSpec& symbol, const SampledFunction& f,
                               const FiberGrid& g1) {
    const AtomCase kind = atom.kind();
    if (g1.kind != kind) throw std::invalid_argument("apply_tlo_slow: G1 rule belongs to the other case");
    // Fiber-side grid: omega for wavelets, x for windows; analysis-side grid: v or p.
    const LineGrid fiber_grid = kind == AtomCase::wavelet ? f.grid.dual() : f.grid;
    const LineGrid analysis_grid = kind == AtomCase::wavelet ? f.grid : f.grid.dual();
    const SampledFunction input = kind == AtomCase::wavelet ? fourier(f, FourierSign::forward) : f;
    const auto omegas = fiber_grid.points();
    const RowMatrix ell = profile_table(atom, g1, omegas);
    const RowMatrix a = symbol_table(symbol, g1, analysis_grid);
    const LineTransform to_analysis(fiber_grid, analysis_grid, backward_sign(kind));
    const LineTransform to_fiber(analysis_grid, fiber_grid, forward_sign(kind));

    const std::size_t n = fiber_grid.count();
    SampledFunction acc = SampledFunction::zeros(fiber_grid);
    std::vector<cplx> row(n);
    for (std::size_t k = 0; k < g1.size(); ++k) {
        bool any = false;
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = input.values[j] * ell(k, j);
            any = any || row[j] != 0.0;
        }
        if (!any) continue;
        to_analysis.apply(row);  // row of W f
        for (std::size_t m = 0; m < n; ++m) row[m] *= a(k, m);
        to_fiber.apply(row);
        const double w = g1.weights[k];
        for (std::size_t j = 0; j < n; ++j) acc.values[j] += w * std::conj(ell(k, j)) * row[j];
    }
    if (kind == AtomCase::wavelet) return fourier(acc, FourierSign::inverse, f.grid);
    return acc;
}

SampledFunction apply_tlo_slow(const Atom& atom, const SymbolSpec& symbol, const SampledFunction& f) {
    const LineGrid fiber_grid = atom.kind() == AtomCase::wavelet ? f.grid.dual() : f.grid;
    const FiberGrid g1 = fiber_rule(atom, FiberDomain::defaults(atom.kind()), fiber_grid.points(),
                                    symbol.first_breakpoints(), 2);
    return apply_tlo_slow(atom, symbol, f, g1);
}

SampledFunction apply_tlo_fast(const Atom& atom, const SymbolSpec& symbol, const SampledFunction& f) {
    if (symbol.kind != SymbolSpec::Kind::first_variable && symbol.kind != SymbolSpec::Kind::piecewise_constant)
        throw std::invalid_argument("the diagonalized path needs a first-variable symbol, got " +
                                    std::string(to_string(symbol.kind)));
    if (atom.kind() == AtomCase::wavelet) {
        SampledFunction spectrum_f = fourier(f, FourierSign::forward);
        const GammaFunction gamma = gamma_function(atom, symbol.alpha, spectrum_f.grid);
        for (std::size_t j = 0; j < spectrum_f.values.size(); ++j) spectrum_f.values[j] *= gamma.values[j];
        return fourier(spectrum_f, FourierSign::inverse, f.grid);
    }
    const GammaFunction gamma = gamma_function(atom, symbol.alpha, f.grid);
    SampledFunction out = f;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] *= gamma.values[j];
    return out;
}

FilterResult apply_tlo_to_signal(const Atom& atom, const SymbolSpec& symbol, const SampledFunction& f,
                                 bool with_fast) {
    FilterResult result{apply_tlo_slow(atom, symbol, f), std::nullopt, 0.0};
    if (with_fast) {
        result.fast = apply_tlo_fast(atom, symbol, f);
        result.deviation = relative_l2_error(*result.fast, result.slow);
    }
    return result;
}

}  // namespace tlo
