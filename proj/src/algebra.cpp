#include "tlo/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tlo {

Partition::Partition(const FiberDomain& domain, std::vector<std::vector<Interval>> pieces)
    : domain_(domain), pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("Partition: need at least one piece");
    std::vector<Interval> all;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        if (pieces_[k].empty()) throw std::invalid_argument("Partition: piece " + std::to_string(k) + " is empty");
        for (const Interval& iv : pieces_[k]) {
            if (!(iv.hi > iv.lo)) throw std::invalid_argument("Partition: piece " + std::to_string(k) +
                                                              " has an interval of zero measure");
            all.push_back(iv);
        }
    }
    std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    const double tol = 1e-12 * (domain.upper - domain.lower);
    double reach = domain.lower;
    for (const Interval& iv : all) {
        if (std::abs(iv.lo - reach) > tol)
            throw std::invalid_argument(iv.lo > reach ? "Partition: pieces leave a gap in the domain"
                                                      : "Partition: pieces overlap");
        reach = iv.hi;
    }
    if (std::abs(reach - domain.upper) > tol)
        throw std::invalid_argument("Partition: pieces do not cover the domain");
}

Partition Partition::split(const FiberDomain& domain, std::vector<double> cuts) {
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::vector<Interval>> pieces;
    double lo = domain.lower;
    for (double c : cuts) {
        if (!(c > lo) || !(c < domain.upper)) throw std::invalid_argument("Partition::split: cut outside the domain");
        pieces.push_back({{lo, c}});
        lo = c;
    }
    pieces.push_back({{lo, domain.upper}});
    return {domain, std::move(pieces)};
}

Profile Partition::indicator(std::size_t k) const {
    const auto& ivs = pieces_.at(k);
    Profile p = Profile::indicator(ivs.front().lo, ivs.front().hi);
    for (std::size_t i = 1; i < ivs.size(); ++i) p = p + Profile::indicator(ivs[i].lo, ivs[i].hi);
    return p;
}

SymbolSpec Partition::symbol(std::span<const cplx> coefficients) const {
    if (coefficients.size() != pieces_.size())
        throw std::invalid_argument("Partition::symbol: need one coefficient per piece");
    Profile p = indicator(0).scaled(coefficients[0]);
    for (std::size_t k = 1; k < pieces_.size(); ++k) p = p + indicator(k).scaled(coefficients[k]);
    std::ostringstream os;
    os.precision(17);
    os << "piecewise(" << describe() << "; coefficients";
    for (const cplx& c : coefficients) os << " " << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
    os << ")";
    return SymbolSpec::piecewise(std::move(p), os.str());
}

std::string Partition::describe() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        if (k) os << " | ";
        for (std::size_t i = 0; i < pieces_[k].size(); ++i) {
            if (i) os << " u ";
            os << "[" << pieces_[k][i].lo << "," << pieces_[k][i].hi << "]";
        }
    }
    return os.str();
}

double NablaCloud::simplex_defect() const {
    double worst = 0.0;
    for (const auto& p : points) {
        double sum = 0.0;
        for (double z : p) {
            worst = std::max(worst, -z);
            sum += z;
        }
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

NablaCloud gamma_vector(const Atom& atom, const Partition& partition, const LineGrid& xi_grid,
                        const CalculusOptions& options) {
    if (partition.domain().kind != atom.kind()) throw std::invalid_argument("gamma_vector: partition case mismatch");
    const std::size_t m = partition.size();
    std::vector<double> cuts;
    for (std::size_t k = 0; k < m; ++k)
        for (const Interval& iv : partition.piece(k)) {
            cuts.push_back(iv.lo);
            cuts.push_back(iv.hi);
        }
    auto owner = [&partition, m](double z) -> std::size_t {
        for (std::size_t k = 0; k < m; ++k)
            for (const Interval& iv : partition.piece(k))
                if (z >= iv.lo && z <= iv.hi) return k;
        return m;
    };
    NablaCloud cloud{xi_grid, m, {}, partition.describe()};
    cloud.points.reserve(xi_grid.count());
    for (std::size_t i = 0; i < xi_grid.count(); ++i) {
        const double xi = xi_grid.at(i);
        const double omegas[] = {xi};
        const FiberGrid rule = fiber_rule(atom, options.domain, omegas, cuts, options.order);
        const auto [lo, hi] = atom.fiber_support(xi);
        std::vector<double> point(m, 0.0);
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const double z = rule.nodes[k];
            if (z < lo || z > hi) continue;
            const double density = std::norm(fiber_profile(atom, z, xi));
            if (density == 0.0) continue;
            const std::size_t piece = owner(z);
            if (piece < m) point[piece] += rule.weights[k] * density;
        }
        cloud.points.push_back(std::move(point));
    }
    return cloud;
}

NablaCloud gamma_vector(const Atom& atom, const Partition& partition, const LineGrid& xi_grid) {
    CalculusOptions options = CalculusOptions::defaults(atom.kind());
    options.domain = FiberDomain(atom.kind(), partition.domain().lower, partition.domain().upper, options.domain.cells);
    return gamma_vector(atom, partition, xi_grid, options);
}

double cloud_distance(const NablaCloud& a, const NablaCloud& b) {
    if (a.m != b.m) throw std::invalid_argument("cloud_distance: clouds live in different dimensions");
    auto sq = [](const std::vector<double>& p, const std::vector<double>& q) {
        double s = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) s += (p[k] - q[k]) * (p[k] - q[k]);
        return s;
    };
    auto directed = [&sq](const NablaCloud& from, const NablaCloud& to) {
        double worst = 0.0;
        for (const auto& p : from.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to.points) {
                best = std::min(best, sq(p, q));
                if (best == 0.0) break;
            }
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(directed(a, b), directed(b, a));
}

std::vector<RefinementStep> refine_cloud(const Atom& atom, const Partition& partition, double half_width,
                                         std::size_t n0, double tolerance, std::size_t max_n) {
    std::vector<RefinementStep> history;
    std::size_t n = n0;
    NablaCloud coarse = gamma_vector(atom, partition, operator_grid(atom.kind(), n, half_width));
    while (n < max_n) {
        NablaCloud fine = gamma_vector(atom, partition, operator_grid(atom.kind(), 2 * n, half_width));
        const double d = cloud_distance(coarse, fine);
        history.push_back({n, d});
        if (d < tolerance) break;
        coarse = std::move(fine);
        n *= 2;
    }
    return history;
}

TauImage tau_evaluate(std::span<const cplx> coefficients, const NablaCloud& cloud) {
    if (coefficients.size() != cloud.m) throw std::invalid_argument("tau_evaluate: need one coefficient per piece");
    TauImage image;
    image.values.reserve(cloud.points.size());
    for (const auto& p : cloud.points) {
        cplx v{0.0, 0.0};
        for (std::size_t k = 0; k < cloud.m; ++k) v += coefficients[k] * p[k];
        image.values.push_back(v);
        image.norm = std::max(image.norm, std::abs(v));
    }
    return image;
}

CommutatorReport commutator_diagnostics(const Atom& atom, const Profile& alpha1, const Profile& alpha2,
                                        const LineGrid& xi_grid) {
    const OperatorMatrix m1 = build_direct(atom, SymbolSpec::first(alpha1), xi_grid);
    const OperatorMatrix m2 = build_direct(atom, SymbolSpec::first(alpha2), xi_grid);
    const RowMatrix comm = m1.values * m2.values - m2.values * m1.values;
    const double scale = operator_norm(m1.values) * operator_norm(m2.values);
    const double c = operator_norm(comm);

    const GammaFunction g1 = gamma_function(atom, alpha1, xi_grid);
    const GammaFunction g2 = gamma_function(atom, alpha2, xi_grid);
    const GammaFunction g12 = gamma_function(atom, alpha1 * alpha2, xi_grid);
    GammaFunction semi{xi_grid, std::vector<cplx>(xi_grid.count()), atom.name(),
                       "semi(" + alpha1.describe() + ";" + alpha2.describe() + ")"};
    double sup = 0.0;
    for (std::size_t i = 0; i < xi_grid.count(); ++i) {
        semi.values[i] = g1.values[i] * g2.values[i] - g12.values[i];
        sup = std::max(sup, std::abs(semi.values[i]));
    }
    return {scale > 0.0 ? c / scale : c, std::move(semi), sup};
}

InvariantSubspaceReport invariant_subspace_check(const Atom& atom, const Profile& alpha,
                                                 std::span<const Interval> subset, const LineGrid& xi_grid) {
    const OperatorMatrix m = build_direct(atom, SymbolSpec::first(alpha), xi_grid);
    const auto n = static_cast<Eigen::Index>(xi_grid.count());
    Eigen::VectorXd mask = Eigen::VectorXd::Zero(n);
    InvariantSubspaceReport report;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = xi_grid.at(static_cast<std::size_t>(i));
        for (const Interval& iv : subset)
            if (xi >= iv.lo && xi <= iv.hi) {
                mask[i] = 1.0;
                ++report.dimension;
                break;
            }
    }
    const RowMatrix comm = mask.asDiagonal() * m.values - m.values * mask.asDiagonal();
    report.commutator = operator_norm(comm);
    const double scale = operator_norm(m.values);
    report.relative = scale > 0.0 ? report.commutator / scale : report.commutator;
    return report;
}

std::vector<Profile> symbol_pool(AtomCase kind) {
    const double inf = std::numeric_limits<double>::infinity();
    if (kind == AtomCase::gabor)
        return {Profile::indicator(-1.0, 1.0), Profile::gaussian(0.0, 2.0), Profile::indicator(0.0, inf),
                Profile::cosine(1.0, 2.0)};
    return {Profile::indicator(1.0, 2.0), Profile::gaussian(1.0, 1.0), Profile::indicator(0.5, 4.0),
            Profile::cosine(2.0, 1.5)};
}

Partition default_partition(AtomCase kind) {
    const FiberDomain domain = FiberDomain::defaults(kind);
    return Partition::split(domain, kind == AtomCase::gabor ? std::vector<double>{-1.0, 1.0}
                                                            : std::vector<double>{0.5, 2.0});
}

AlgebraCheck verify_algebra(const Atom& atom, std::size_t n, std::uint64_t seed) {
    constexpr double kCommutatorTol = 5e-3;
    constexpr double kSemiTol = 1e-6;
    constexpr double kSimplexTol = 1e-3;
    constexpr double kTauTol = 2e-3;
    const AtomCase kind = atom.kind();
    const LineGrid grid = operator_grid(kind, n);
    AlgebraCheck check;
    check.atom = atom.name();
    check.n = n;

    const auto pool = symbol_pool(kind);
    std::vector<RowMatrix> matrices;
    for (const Profile& p : pool) matrices.push_back(build_direct(atom, SymbolSpec::first(p), grid).values);
    for (std::size_t i = 0; i < matrices.size(); ++i)
        for (std::size_t j = i + 1; j < matrices.size(); ++j) {
            const RowMatrix comm = matrices[i] * matrices[j] - matrices[j] * matrices[i];
            const double scale = operator_norm(matrices[i]) * operator_norm(matrices[j]);
            check.commutator_max = std::max(check.commutator_max, operator_norm(comm) / scale);
        }

    if (kind == AtomCase::gabor) {
        const double inf = std::numeric_limits<double>::infinity();
        const CommutatorReport semi = commutator_diagnostics(atom, Profile::indicator(0.0, inf),
                                                             Profile::indicator(-inf, 0.0), LineGrid::centered(8.0, n));
        check.semi_commutator_sup = semi.semi_commutator_sup;
    }

    const Partition partition = default_partition(kind);
    const NablaCloud cloud = gamma_vector(atom, partition, grid);
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        if (!in_healthy_band(partition.domain(), grid.at(i))) continue;
        double sum = 0.0;
        for (double z : cloud.points[i]) {
            check.simplex_defect = std::max(check.simplex_defect, -z);
            sum += z;
        }
        check.simplex_defect = std::max(check.simplex_defect, std::abs(sum - 1.0));
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int t = 0; t < 5; ++t) {
        std::vector<cplx> coefficients(partition.size());
        for (cplx& c : coefficients) c = {normal(rng), normal(rng)};
        const TauImage image = tau_evaluate(coefficients, cloud);
        const double direct = operator_norm(build_direct(atom, partition.symbol(coefficients), grid).values);
        check.tau_isometry_max = std::max(check.tau_isometry_max, std::abs(image.norm - direct) / direct);
    }

    check.pass = check.commutator_max <= kCommutatorTol && check.simplex_defect <= kSimplexTol &&
                 check.tau_isometry_max <= kTauTol &&
                 (!check.semi_commutator_sup || std::abs(*check.semi_commutator_sup - 0.25) <= kSemiTol);
    return check;
}

}  // namespace tlo
