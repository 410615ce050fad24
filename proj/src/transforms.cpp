#include "tlo/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tlo/fourier.hpp"
#include "tlo/signals.hpp"

namespace tlo {

namespace {

void require_kind(const Atom& atom, AtomCase kind, const char* where) {
    if (atom.kind() != kind)
        throw std::invalid_argument(std::string(where) + ": atom is a " + std::string(to_string(atom.kind())) +
                                    " atom but the field is " + std::string(to_string(kind)));
}

FourierSign forward_sign(AtomCase kind) {
    return kind == AtomCase::wavelet ? FourierSign::forward : FourierSign::inverse;
}

FourierSign opposite(FourierSign s) {
    return s == FourierSign::forward ? FourierSign::inverse : FourierSign::forward;
}

void transform_rows(RowMatrix& values, const LineTransform& transform) {
    for (Eigen::Index k = 0; k < values.rows(); ++k)
        transform.apply(std::span<cplx>(values.row(k).data(), static_cast<std::size_t>(values.cols())));
}

}  // namespace

PhasePlaneField PhasePlaneField::zeros(AtomCase kind, FieldDomain domain, FiberGrid g1, LineGrid g2,
                                       LineGrid partner) {
    if (g1.kind != kind) throw std::invalid_argument("PhasePlaneField: G1 rule belongs to the other case");
    if (!g2.pairs_with(partner)) throw std::invalid_argument("PhasePlaneField: partner grid is not a Fourier pair");
    const auto rows = static_cast<Eigen::Index>(g1.size());
    const auto cols = static_cast<Eigen::Index>(g2.count());
    return {kind, domain, std::move(g1), g2, partner, RowMatrix::Zero(rows, cols)};
}

double PhasePlaneField::norm() const {
    double total = 0.0;
    for (Eigen::Index k = 0; k < values.rows(); ++k) total += g1.weights[k] * values.row(k).squaredNorm();
    return std::sqrt(total * g2.step());
}

cplx PhasePlaneField::inner(const PhasePlaneField& other) const {
    if (other.values.rows() != values.rows() || other.values.cols() != values.cols())
        throw std::invalid_argument("PhasePlaneField::inner: shape mismatch");
    cplx total{0.0, 0.0};
    for (Eigen::Index k = 0; k < values.rows(); ++k)
        total += g1.weights[k] * other.values.row(k).dot(values.row(k));
    return total * g2.step();
}

FiberGrid default_fiber_grid(AtomCase kind) {
    if (kind == AtomCase::wavelet) return FiberGrid::from(ScaleGrid::defaults());
    return FiberGrid::from(LineGrid::midpoints(-16.0, 16.0, 512));
}

FiberGrid fiber_rule(const Atom& atom, const FiberDomain& domain, std::span<const double> omegas,
                     std::span<const double> extra_breakpoints, int order) {
    if (domain.kind != atom.kind()) throw std::invalid_argument("fiber_rule: domain and atom cases differ");
    std::vector<double> breaks(extra_breakpoints.begin(), extra_breakpoints.end());
    for (double omega : omegas) {
        const auto b = atom.fiber_breakpoints(omega);
        breaks.insert(breaks.end(), b.begin(), b.end());
    }
    return FiberGrid::build(domain, breaks, order);
}

RowMatrix profile_table(const Atom& atom, const FiberGrid& g1, std::span<const double> omegas) {
    if (g1.kind != atom.kind()) throw std::invalid_argument("profile_table: G1 rule belongs to the other case");
    RowMatrix table(static_cast<Eigen::Index>(g1.size()), static_cast<Eigen::Index>(omegas.size()));
    for (std::size_t j = 0; j < omegas.size(); ++j) {
        const auto [lo, hi] = atom.fiber_support(omegas[j]);
        for (std::size_t k = 0; k < g1.size(); ++k) {
            const double z = g1.nodes[k];
            table(k, j) = (z < lo || z > hi) ? cplx{0.0, 0.0} : fiber_profile(atom, z, omegas[j]);
        }
    }
    return table;
}

std::vector<double> fiber_norms(const Atom& atom, const FiberGrid& g1, std::span<const double> omegas) {
    const RowMatrix table = profile_table(atom, g1, omegas);
    std::vector<double> out(omegas.size(), 0.0);
    for (Eigen::Index k = 0; k < table.rows(); ++k)
        for (Eigen::Index j = 0; j < table.cols(); ++j) out[j] += g1.weights[k] * std::norm(table(k, j));
    return out;
}

PhasePlaneField analyze(const Atom& atom, const SampledFunction& f, const FiberGrid& g1) {
    const AtomCase kind = atom.kind();
    if (g1.kind != kind) throw std::invalid_argument("analyze: G1 rule belongs to the other case");
    if (kind == AtomCase::wavelet) {
        // W f(u, .) = F^{-1}[ f^ ell(u, .) ]
        const SampledFunction spectrum = fourier(f, FourierSign::forward);
        const auto omegas = spectrum.grid.points();
        PhasePlaneField field = PhasePlaneField::zeros(kind, FieldDomain::analysis, g1, f.grid, spectrum.grid);
        const RowMatrix table = profile_table(atom, g1, omegas);
        const Eigen::Map<const Eigen::RowVectorXcd> fhat(spectrum.values.data(),
                                                         static_cast<Eigen::Index>(spectrum.values.size()));
        field.values = table.array().rowwise() * fhat.array();
        transform_rows(field.values, LineTransform(spectrum.grid, f.grid, FourierSign::inverse));
        return field;
    }
    // W f(q, .) = F[ f ell(q, .) ]
    const LineGrid freq = f.grid.dual();
    PhasePlaneField field = PhasePlaneField::zeros(kind, FieldDomain::analysis, g1, freq, f.grid);
    const RowMatrix table = profile_table(atom, g1, f.grid.points());
    const Eigen::Map<const Eigen::RowVectorXcd> fx(f.values.data(), static_cast<Eigen::Index>(f.values.size()));
    field.values = table.array().rowwise() * fx.array();
    transform_rows(field.values, LineTransform(f.grid, freq, FourierSign::forward));
    return field;
}

PhasePlaneField fiber_fourier(const PhasePlaneField& field, Direction direction) {
    const bool forward = direction == Direction::forward;
    const FieldDomain expected = forward ? FieldDomain::analysis : FieldDomain::fiber;
    if (field.domain != expected)
        throw std::invalid_argument(forward ? "fiber_fourier: forward direction needs analysis coordinates"
                                            : "fiber_fourier: backward direction needs fiber coordinates");
    const FourierSign sign = forward ? forward_sign(field.kind) : opposite(forward_sign(field.kind));
    PhasePlaneField out{field.kind, forward ? FieldDomain::fiber : FieldDomain::analysis, field.g1, field.partner,
                        field.g2, field.values};
    transform_rows(out.values, LineTransform(field.g2, field.partner, sign));
    return out;
}

PhasePlaneField embed_fibers(const Atom& atom, const SampledFunction& f, const FiberGrid& g1) {
    return embed_fibers(atom, f, g1, f.grid.dual());
}

PhasePlaneField embed_fibers(const Atom& atom, const SampledFunction& f, const FiberGrid& g1,
                             const LineGrid& partner) {
    PhasePlaneField field = PhasePlaneField::zeros(atom.kind(), FieldDomain::fiber, g1, f.grid, partner);
    const RowMatrix table = profile_table(atom, g1, f.grid.points());
    const Eigen::Map<const Eigen::RowVectorXcd> fv(f.values.data(), static_cast<Eigen::Index>(f.values.size()));
    field.values = table.array().rowwise() * fv.array();
    return field;
}

SampledFunction project_fibers(const Atom& atom, const PhasePlaneField& field) {
    require_kind(atom, field.kind, "project_fibers");
    if (field.domain != FieldDomain::fiber)
        throw std::invalid_argument("project_fibers: field must be in fiber coordinates");
    const RowMatrix table = profile_table(atom, field.g1, field.g2.points());
    SampledFunction out = SampledFunction::zeros(field.g2);
    for (Eigen::Index k = 0; k < table.rows(); ++k) {
        const double w = field.g1.weights[k];
        for (Eigen::Index j = 0; j < table.cols(); ++j)
            out.values[j] += w * field.values(k, j) * std::conj(table(k, j));
    }
    return out;
}

SampledFunction bargmann(const Atom& atom, const PhasePlaneField& field) {
    return project_fibers(atom, fiber_fourier(field, Direction::forward));
}

PhasePlaneField bargmann_adjoint(const Atom& atom, const SampledFunction& f, const FiberGrid& g1) {
    return fiber_fourier(embed_fibers(atom, f, g1), Direction::backward);
}

PhasePlaneField bargmann_adjoint(const Atom& atom, const SampledFunction& f, const FiberGrid& g1,
                                 const LineGrid& partner) {
    return fiber_fourier(embed_fibers(atom, f, g1, partner), Direction::backward);
}

TransformCheck verify_transforms(const Atom& atom, std::size_t n, std::uint64_t seed, std::size_t signals,
                                 double tolerance) {
    TransformCheck check;
    check.tolerance = tolerance;
    check.atom = atom.name();
    check.n = n;
    check.signals = signals;
    const FiberGrid g1 = default_fiber_grid(atom.kind());
    const LineGrid grid = LineGrid::centered(8.0, n);
    for (std::size_t t = 0; t < signals; ++t) {
        const SampledFunction f = random_bandlimited(grid, seed * 1000003ULL + t);
        const PhasePlaneField w = analyze(atom, f, g1);
        const SampledFunction r = bargmann(atom, w);
        const SampledFunction expected = atom.kind() == AtomCase::wavelet ? fourier(f, FourierSign::forward) : f;
        check.factorization_max = std::max(check.factorization_max, relative_l2_error(r, expected));
        const double norms[] = {f.norm(), w.norm(), r.norm()};
        for (double a : norms)
            for (double b : norms) check.isometry_max = std::max(check.isometry_max, std::abs(a - b) / norms[0]);
    }
    check.pass = check.factorization_max <= check.tolerance && check.isometry_max <= check.tolerance;
    return check;
}

}  // namespace tlo
