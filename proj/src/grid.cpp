#include "tlo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tlo/quadrature.hpp"

namespace tlo {

std::string_view to_string(AtomCase kind) {
    return kind == AtomCase::wavelet ? "wavelet" : "gabor";
}

AtomCase parse_atom_case(std::string_view text) {
    if (text == "wavelet") return AtomCase::wavelet;
    if (text == "gabor") return AtomCase::gabor;
    throw std::invalid_argument("unknown case '" + std::string(text) + "' (expected wavelet or gabor)");
}

// ---------------------------------------------------------------------------
// LineGrid

LineGrid::LineGrid(double start, double step, std::size_t count) : start_(start), step_(step), count_(count) {
    if (!std::isfinite(start) || !std::isfinite(step) || !(step > 0.0))
        throw std::invalid_argument("LineGrid: step must be finite and positive");
    if (count < 2) throw std::invalid_argument("LineGrid: count must be at least 2");
    if (!std::isfinite(back())) throw std::invalid_argument("LineGrid: samples are not finite");
}

LineGrid LineGrid::centered(double half_width, std::size_t count) {
    if (!(half_width > 0.0)) throw std::invalid_argument("LineGrid::centered: half width must be positive");
    const double step = 2.0 * half_width / static_cast<double>(count);
    return {-static_cast<double>(count / 2) * step, step, count};
}

LineGrid LineGrid::midpoints(double lo, double hi, std::size_t count) {
    if (!(hi > lo)) throw std::invalid_argument("LineGrid::midpoints: need lo < hi");
    const double step = (hi - lo) / static_cast<double>(count);
    return {lo + 0.5 * step, step, count};
}

std::vector<double> LineGrid::points() const {
    std::vector<double> out(count_);
    for (std::size_t j = 0; j < count_; ++j) out[j] = at(j);
    return out;
}

LineGrid LineGrid::dual() const {
    const double step = 1.0 / (static_cast<double>(count_) * step_);
    return {-static_cast<double>(count_ / 2) * step, step, count_};
}

bool LineGrid::pairs_with(const LineGrid& other) const noexcept {
    if (other.count_ != count_) return false;
    const double product = step_ * other.step_ * static_cast<double>(count_);
    return std::abs(product - 1.0) <= 1e-12;
}

bool LineGrid::is_centered() const noexcept {
    const double expected = -static_cast<double>(count_ / 2) * step_;
    return std::abs(start_ - expected) <= 1e-12 * std::max(1.0, std::abs(expected));
}

// ---------------------------------------------------------------------------
// SampledFunction

SampledFunction::SampledFunction(LineGrid g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.count())
        throw std::invalid_argument("SampledFunction: " + std::to_string(values.size()) +
                                    " values for a grid of " + std::to_string(grid.count()));
}

SampledFunction SampledFunction::zeros(const LineGrid& g) {
    return {g, std::vector<cplx>(g.count())};
}

double SampledFunction::norm() const {
    double sum = 0.0;
    for (const cplx& v : values) sum += std::norm(v);
    return std::sqrt(grid.step() * sum);
}

cplx SampledFunction::interpolate(double x) const {
    const double pos = (x - grid.start()) / grid.step();
    if (!(pos >= 0.0) || pos > static_cast<double>(grid.count() - 1)) return {0.0, 0.0};
    const auto j = static_cast<std::size_t>(pos);
    if (j + 1 >= grid.count()) return values.back();
    const double frac = pos - static_cast<double>(j);
    return values[j] * (1.0 - frac) + values[j + 1] * frac;
}

cplx inner(const SampledFunction& f, const SampledFunction& g) {
    if (f.values.size() != g.values.size()) throw std::invalid_argument("inner: length mismatch");
    cplx sum{0.0, 0.0};
    for (std::size_t j = 0; j < f.values.size(); ++j) sum += f.values[j] * std::conj(g.values[j]);
    return sum * f.grid.step();
}

double relative_l2_error(const SampledFunction& f, const SampledFunction& reference) {
    if (f.values.size() != reference.values.size())
        throw std::invalid_argument("relative_l2_error: length mismatch");
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        diff += std::norm(f.values[j] - reference.values[j]);
        ref += std::norm(reference.values[j]);
    }
    return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff * reference.grid.step());
}

// ---------------------------------------------------------------------------
// FiberDomain

FiberDomain::FiberDomain(AtomCase k, double lo, double hi, std::size_t n) : kind(k), lower(lo), upper(hi), cells(n) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw std::invalid_argument("FiberDomain: need finite lower < upper");
    if (k == AtomCase::wavelet && !(lo > 0.0))
        throw std::invalid_argument("FiberDomain: scales must be positive");
    if (n < 1) throw std::invalid_argument("FiberDomain: need at least one cell");
}

FiberDomain FiberDomain::defaults(AtomCase k) {
    if (k == AtomCase::wavelet) return {k, std::ldexp(1.0, -8), std::ldexp(1.0, 8), 512};
    return {k, -16.0, 16.0, 512};
}

double FiberDomain::to_panel(double r) const {
    return kind == AtomCase::wavelet ? std::log(r) : r;
}

double FiberDomain::from_panel(double t) const {
    return kind == AtomCase::wavelet ? std::exp(t) : t;
}

double FiberDomain::measure_density(double t) const {
    // du/u^2 = e^{-t} dt under u = e^t.
    return kind == AtomCase::wavelet ? std::exp(-t) : 1.0;
}

std::vector<double> FiberDomain::panel_edges() const {
    const double a = to_panel(lower);
    const double b = to_panel(upper);
    std::vector<double> edges(cells + 1);
    for (std::size_t k = 0; k <= cells; ++k)
        edges[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(cells);
    edges.front() = a;
    edges.back() = b;
    return edges;
}

bool FiberDomain::panel_interval(double r_lo, double r_hi, double& t_lo, double& t_hi) const {
    const double lo = std::max(r_lo, lower);
    const double hi = std::min(r_hi, upper);
    if (!(hi > lo)) return false;
    t_lo = to_panel(lo);
    t_hi = to_panel(hi);
    return t_hi > t_lo;
}

// ---------------------------------------------------------------------------
// ScaleGrid

ScaleGrid::ScaleGrid(double u_min, double u_max, std::size_t count) : u_min_(u_min), u_max_(u_max) {
    if (!(u_min > 0.0) || !(u_max > u_min) || !std::isfinite(u_max))
        throw std::invalid_argument("ScaleGrid: need 0 < u_min < u_max < inf");
    if (count < 2) throw std::invalid_argument("ScaleGrid: count must be at least 2");
    const double t0 = std::log(u_min);
    const double t1 = std::log(u_max);
    log_step_ = (t1 - t0) / static_cast<double>(count);
    nodes_.resize(count);
    weights_.assign(count, log_step_);
    for (std::size_t k = 0; k < count; ++k)
        nodes_[k] = std::exp(t0 + (static_cast<double>(k) + 0.5) * log_step_);
}

ScaleGrid ScaleGrid::defaults() {
    return {std::ldexp(1.0, -8), std::ldexp(1.0, 8), 512};
}

FiberDomain ScaleGrid::domain() const {
    return {AtomCase::wavelet, u_min_, u_max_, count()};
}

// ---------------------------------------------------------------------------
// FiberGrid

FiberGrid FiberGrid::build(const FiberDomain& domain, std::span<const double> breakpoints, int order) {
    std::vector<double> extra;
    extra.reserve(breakpoints.size());
    for (double r : breakpoints) {
        if (r > domain.lower && r < domain.upper) extra.push_back(domain.to_panel(r));
    }
    const auto base = domain.panel_edges();
    const auto edges = merge_edges(base, extra, base.front(), base.back());

    FiberGrid grid{domain.kind, domain.lower, domain.upper, {}, {}};
    std::vector<double> t_nodes;
    std::vector<double> t_weights;
    t_nodes.reserve((edges.size() - 1) * static_cast<std::size_t>(order));
    t_weights.reserve(t_nodes.capacity());
    append_composite(edges, order, t_nodes, t_weights);
    grid.nodes.resize(t_nodes.size());
    grid.weights.resize(t_nodes.size());
    for (std::size_t k = 0; k < t_nodes.size(); ++k) {
        grid.nodes[k] = domain.from_panel(t_nodes[k]);
        grid.weights[k] = t_weights[k] * domain.measure_density(t_nodes[k]);
    }
    return grid;
}

FiberGrid FiberGrid::from(const ScaleGrid& scales) {
    FiberGrid grid{AtomCase::wavelet, scales.u_min(), scales.u_max(), scales.nodes(), scales.weights()};
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) grid.weights[k] /= grid.nodes[k];
    return grid;
}

FiberGrid FiberGrid::from(const LineGrid& shifts) {
    const double half = 0.5 * shifts.step();
    return {AtomCase::gabor, shifts.start() - half, shifts.back() + half, shifts.points(),
            std::vector<double>(shifts.count(), shifts.step())};
}

}  // namespace tlo
