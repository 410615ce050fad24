#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace tlo {

using cplx = std::complex<double>;

/// Which reproducing formula an object belongs to: the affine (wavelet)
/// group acting on the half-plane, or the Weyl-Heisenberg (Gabor) group
/// acting on the plane.
enum class AtomCase { wavelet, gabor };

std::string_view to_string(AtomCase kind);
AtomCase parse_atom_case(std::string_view text);

/// Uniform samples x_j = start + j * step for j = 0, ..., count - 1.
class LineGrid {
public:
    LineGrid(double start, double step, std::size_t count);

    /// [-half_width, half_width) with a sample on the origin (even count).
    static LineGrid centered(double half_width, std::size_t count);
    /// Midpoints of `count` equal cells tiling [lo, hi].
    static LineGrid midpoints(double lo, double hi, std::size_t count);

    double start() const noexcept { return start_; }
    double step() const noexcept { return step_; }
    std::size_t count() const noexcept { return count_; }
    double at(std::size_t j) const noexcept { return start_ + static_cast<double>(j) * step_; }
    double back() const noexcept { return at(count_ - 1); }
    std::vector<double> points() const;

    /// The grid a length-count() Fourier transform lands on: step
    /// 1 / (count * step), laid out like `centered`.
    LineGrid dual() const;

    /// True when the two grids form a Fourier pair (same count, reciprocal steps).
    bool pairs_with(const LineGrid& other) const noexcept;
    bool is_centered() const noexcept;

    bool operator==(const LineGrid&) const = default;

private:
    double start_;
    double step_;
    std::size_t count_;
};

/// Complex samples of a function on a LineGrid.
struct SampledFunction {
    LineGrid grid;
    std::vector<cplx> values;

    SampledFunction(LineGrid g, std::vector<cplx> v);
    static SampledFunction zeros(const LineGrid& g);

    /// Riemann-sum L2 norm, sqrt(step * sum |f_j|^2).
    double norm() const;
    /// Linear interpolation between samples; zero outside [start, back].
    cplx interpolate(double x) const;
};

/// Riemann-sum inner product <f, g> = step * sum f_j conj(g_j).
cplx inner(const SampledFunction& f, const SampledFunction& g);
/// ||f - g|| / ||g||, or ||f - g|| when g vanishes.
double relative_l2_error(const SampledFunction& f, const SampledFunction& reference);

/// Truncation of the first coordinate G1 of the phase plane together with a
/// base cell count. For wavelets G1 = (0, inf) with measure du/u^2 and cells
/// are uniform in t = ln u; for windows G1 = R with Lebesgue measure.
struct FiberDomain {
    AtomCase kind;
    double lower;
    double upper;
    std::size_t cells;

    FiberDomain(AtomCase k, double lo, double hi, std::size_t n);
    /// [2^-8, 2^8] for wavelets, [-16, 16] for windows, 512 cells each.
    static FiberDomain defaults(AtomCase k);

    /// Panel variable: ln u for wavelets, q for windows.
    double to_panel(double r) const;
    double from_panel(double t) const;
    /// Density of d(zeta_1) with respect to the panel variable at t.
    double measure_density(double t) const;
    /// Cell edges in the panel variable.
    std::vector<double> panel_edges() const;
    /// Clamp a G1 interval to the domain and map it to panel coordinates.
    bool panel_interval(double r_lo, double r_hi, double& t_lo, double& t_hi) const;
};

/// Log-uniform scale nodes with midpoint weights for the measure du/u.
class ScaleGrid {
public:
    ScaleGrid(double u_min, double u_max, std::size_t count);
    static ScaleGrid defaults();

    double u_min() const noexcept { return u_min_; }
    double u_max() const noexcept { return u_max_; }
    std::size_t count() const noexcept { return nodes_.size(); }
    double log_step() const noexcept { return log_step_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    /// Weights for du/u; they sum to ln(u_max / u_min).
    const std::vector<double>& weights() const noexcept { return weights_; }

    FiberDomain domain() const;

private:
    double u_min_;
    double u_max_;
    double log_step_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// A quadrature rule on G1 with weights for d(zeta_1). Every discrete pairing
/// over the first coordinate (fiber norms, Q*, kernels) goes through one.
struct FiberGrid {
    AtomCase kind;
    double lower;
    double upper;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }

    /// Composite Gauss-Legendre rule of the given order on the domain's cells,
    /// with cells split at every breakpoint strictly inside the domain.
    static FiberGrid build(const FiberDomain& domain, std::span<const double> breakpoints = {},
                           int order = 1);
    /// Midpoint rule of the scale grid, weights converted to d(zeta_1) = du/u^2.
    static FiberGrid from(const ScaleGrid& scales);
    /// Riemann sum over a uniform grid of shifts q.
    static FiberGrid from(const LineGrid& shifts);
};

}  // namespace tlo
