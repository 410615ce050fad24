#include "tlo/symbol_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tlo/fourier.hpp"

namespace tlo {

namespace {

constexpr double kOverflowGuard = 1e300;

cplx checked_alpha(const Profile& alpha, double r) {
    const cplx a = alpha(r);
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        std::ostringstream os;
        os.precision(17);
        os << "symbol " << alpha.describe() << " is not finite at r = " << r;
        throw std::domain_error(os.str());
    }
    return a;
}

}  // namespace

CalculusOptions CalculusOptions::defaults(AtomCase kind) {
    const FiberDomain d = FiberDomain::defaults(kind);
    return {FiberDomain(kind, d.lower, d.upper, 128), 8};
}

std::pair<double, double> healthy_band(const FiberDomain& domain) {
    if (domain.kind == AtomCase::wavelet) return {16.0 / domain.upper, 1.0 / (64.0 * domain.lower)};
    return {domain.lower / 4.0, domain.upper / 4.0};
}

bool in_healthy_band(const FiberDomain& domain, double xi) {
    const auto [lo, hi] = healthy_band(domain);
    const double x = domain.kind == AtomCase::wavelet ? std::abs(xi) : xi;
    return x >= lo && x <= hi;
}

GammaFunction gamma_function(const Atom& atom, const Profile& alpha, const LineGrid& xi_grid,
                             const CalculusOptions& options) {
    if (options.domain.kind != atom.kind()) throw std::invalid_argument("gamma_function: domain case mismatch");
    GammaFunction out{xi_grid, std::vector<cplx>(xi_grid.count()), atom.name(), alpha.describe()};
    const auto alpha_breaks = alpha.breakpoints();
    for (std::size_t i = 0; i < xi_grid.count(); ++i) {
        const double xi = xi_grid.at(i);
        const double omegas[] = {xi};
        const FiberGrid rule = fiber_rule(atom, options.domain, omegas, alpha_breaks, options.order);
        const auto [lo, hi] = atom.fiber_support(xi);
        cplx sum{0.0, 0.0};
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const double z = rule.nodes[k];
            if (z < lo || z > hi) continue;
            const double density = std::norm(fiber_profile(atom, z, xi));
            if (density == 0.0) continue;
            sum += rule.weights[k] * density * checked_alpha(alpha, z);
        }
        if (!(std::abs(sum) <= kOverflowGuard)) {
            out.overflow = true;
            sum = {std::numeric_limits<double>::infinity(), 0.0};
        }
        out.values[i] = sum;
    }
    return out;
}

GammaFunction gamma_function(const Atom& atom, const Profile& alpha, const LineGrid& xi_grid) {
    return gamma_function(atom, alpha, xi_grid, CalculusOptions::defaults(atom.kind()));
}

GammaFunction gamma_convolution(const Atom& window, const Profile& alpha, const LineGrid& xi_grid, int oversample) {
    if (window.kind() != AtomCase::gabor) throw std::invalid_argument("gamma_convolution: needs a window");
    if (oversample < 1) throw std::invalid_argument("gamma_convolution: oversample must be positive");
    const double h = xi_grid.step() / oversample;
    // |phi(d)|^2 vanishes for d outside the fiber support at omega = 0, reflected.
    const auto [q_lo, q_hi] = window.fiber_support(0.0);
    const double reach = std::max(std::abs(q_lo), std::abs(q_hi));
    if (!std::isfinite(reach)) throw std::invalid_argument("gamma_convolution: window support must be finite");
    const auto half = static_cast<std::size_t>(std::ceil(reach / h));
    const std::size_t kernel_len = 2 * half + 1;
    const std::size_t signal_len = (xi_grid.count() - 1) * static_cast<std::size_t>(oversample) + kernel_len;
    std::size_t padded = 2;
    while (padded < signal_len + kernel_len) padded *= 2;

    std::vector<cplx> a(padded);
    std::vector<cplx> k(padded);
    const double q0 = xi_grid.start() - static_cast<double>(half) * h;
    for (std::size_t m = 0; m < signal_len; ++m) a[m] = checked_alpha(alpha, q0 + static_cast<double>(m) * h);
    for (std::size_t l = 0; l < kernel_len; ++l)
        k[l] = std::norm(window.time_value((static_cast<double>(l) - static_cast<double>(half)) * h));

    const LineGrid index_grid(0.0, 1.0, padded);
    const LineGrid freq_grid = index_grid.dual();
    const LineTransform forward(index_grid, freq_grid, FourierSign::forward);
    const LineTransform inverse(freq_grid, index_grid, FourierSign::inverse);
    forward.apply(a);
    forward.apply(k);
    for (std::size_t j = 0; j < padded; ++j) a[j] *= k[j];
    inverse.apply(a);

    GammaFunction out{xi_grid, std::vector<cplx>(xi_grid.count()), window.name(), alpha.describe()};
    for (std::size_t i = 0; i < xi_grid.count(); ++i)
        out.values[i] = h * a[i * static_cast<std::size_t>(oversample) + 2 * half];
    return out;
}

SpectrumReport spectrum_from_gamma(const GammaFunction& gamma, bool real_symbol, std::optional<double> symbol_bound) {
    SpectrumReport report;
    report.values = gamma.values;
    report.real = real_symbol;
    report.min = std::numeric_limits<double>::infinity();
    report.max = -std::numeric_limits<double>::infinity();
    double max_abs_xi = 0.0;
    double min_abs_xi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gamma.values.size(); ++i) {
        const cplx v = gamma.values[i];
        report.norm = std::max(report.norm, std::abs(v));
        report.min = std::min(report.min, v.real());
        report.max = std::max(report.max, v.real());
        const double a = std::abs(gamma.grid.at(i));
        max_abs_xi = std::max(max_abs_xi, a);
        if (a > 0.0) min_abs_xi = std::min(min_abs_xi, a);
    }
    if (!real_symbol) report.min = report.max = 0.0;

    if (symbol_bound) {
        report.bounded = true;
        report.verdict = "bounded (symbol bounded)";
        return report;
    }
    bool unbounded = gamma.overflow || !std::isfinite(report.norm);
    if (!unbounded) {
        // Inner part: away from both ends of the sampled |xi| range. On the
        // scale axis growth can happen at either end, so the lower end is
        // trimmed geometrically as well.
        double inner_sup = 0.0;
        bool any_inner = false;
        for (std::size_t i = 0; i < gamma.values.size(); ++i) {
            const double a = std::abs(gamma.grid.at(i));
            if (a <= 0.5 * max_abs_xi && a >= 2.0 * min_abs_xi) {
                inner_sup = std::max(inner_sup, std::abs(gamma.values[i]));
                any_inner = true;
            }
        }
        unbounded = any_inner && report.norm > 1.1 * inner_sup;
    }
    report.bounded = !unbounded;
    report.verdict = unbounded ? "unbounded on sampled range" : "bounded on sampled range";
    return report;
}

namespace {

KernelMatrix build_kernel(const Atom& atom, const Profile* alpha, const LineGrid& xi_grid,
                          const CalculusOptions& options) {
    if (options.domain.kind != atom.kind()) throw std::invalid_argument("kernel: domain case mismatch");
    const auto omegas = xi_grid.points();
    const std::vector<double> alpha_breaks = alpha ? alpha->breakpoints() : std::vector<double>{};
    const FiberGrid rule = fiber_rule(atom, options.domain, omegas, alpha_breaks, options.order);
    const RowMatrix table = profile_table(atom, rule, omegas);
    Eigen::VectorXcd weights(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t k = 0; k < rule.size(); ++k)
        weights[static_cast<Eigen::Index>(k)] = rule.weights[k] * (alpha ? checked_alpha(*alpha, rule.nodes[k]) : 1.0);
    KernelMatrix out{xi_grid, RowMatrix(), alpha ? KernelMatrix::Kind::compound : KernelMatrix::Kind::overlap,
                     atom.name(), alpha ? alpha->describe() : "const:1"};
    // values(i, j) = sum_k w_k a_k conj(L(k, i)) L(k, j)
    out.values = table.adjoint() * weights.asDiagonal() * table;
    if (!alpha || alpha->is_real()) {
        const RowMatrix sym = 0.5 * (out.values + out.values.adjoint());
        out.values = sym;
    }
    return out;
}

}  // namespace

KernelMatrix overlap_kernel(const Atom& atom, const LineGrid& xi_grid, const CalculusOptions& options) {
    return build_kernel(atom, nullptr, xi_grid, options);
}

KernelMatrix overlap_kernel(const Atom& atom, const LineGrid& xi_grid) {
    return overlap_kernel(atom, xi_grid, CalculusOptions::defaults(atom.kind()));
}

KernelMatrix compound_kernel(const Atom& atom, const Profile& alpha, const LineGrid& xi_grid,
                             const CalculusOptions& options) {
    return build_kernel(atom, &alpha, xi_grid, options);
}

KernelMatrix compound_kernel(const Atom& atom, const Profile& alpha, const LineGrid& xi_grid) {
    return compound_kernel(atom, alpha, xi_grid, CalculusOptions::defaults(atom.kind()));
}

}  // namespace tlo
