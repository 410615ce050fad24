#include "tlo/atom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tlo/fourier.hpp"
#include "tlo/quadrature.hpp"

namespace tlo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWaveletTolerance = 1e-6;
constexpr double kWindowTolerance = 1e-10;
// |phi|^2 of the Gaussian window is below 1e-48 beyond this distance.
constexpr double kGaussianRadius = 6.0;
// Haar's |psi^|^2 decays like 1/xi^2; beyond this the admissibility tail is below 1e-8.
constexpr double kHaarReach = 4096.0;

double shannon_height() { return 1.0 / std::sqrt(std::numbers::ln2); }

cplx shannon_freq(double c, double xi) {
    const double a = std::abs(xi);
    return (a >= 1.0 && a <= 2.0) ? cplx{c, 0.0} : cplx{0.0, 0.0};
}

double shannon_time(double c, double x) {
    if (std::abs(x) < 1e-8) return 2.0 * c;  // sin(4 pi x) - sin(2 pi x) ~ 2 pi x
    return c * (std::sin(4.0 * kPi * x) - std::sin(2.0 * kPi * x)) / (kPi * x);
}

double haar_time(double c, double x) {
    if (x >= 0.0 && x < 0.5) return c;
    if (x >= 0.5 && x < 1.0) return -c;
    return 0.0;
}

// c (1 - e^{-i pi xi})^2 / (2 pi i xi) = 2 i c sin^2(pi xi / 2) / (pi xi) e^{-i pi xi}
cplx haar_freq(double c, double xi) {
    if (xi == 0.0) return {0.0, 0.0};
    const double s = std::sin(0.5 * kPi * xi);
    const double amplitude = 2.0 * c * s * s / (kPi * xi);
    return cplx{0.0, amplitude} * unit_phase(-0.5 * xi);
}

double gaussian_time(double c, double x) { return c * std::exp(-kPi * x * x); }

double rect_time(double c, double x) { return (x >= 0.0 && x < 1.0) ? c : 0.0; }

// e^{-i pi xi} sin(pi xi) / (pi xi)
cplx rect_freq(double c, double xi) {
    if (std::abs(xi) < 1e-12) return {c, 0.0};
    return c * std::sin(kPi * xi) / (kPi * xi) * unit_phase(-0.5 * xi);
}

// int_0^inf g(t xi) dt / t with g = |psi^|^2, integrated over panels laid out in s = t |xi|.
template <class Spectrum>
double admissibility_quadrature(Spectrum&& spectrum, double xi, std::span<const double> breakpoints,
                                double reach) {
    if (xi == 0.0 || !std::isfinite(xi))
        throw std::domain_error("admissibility integral is undefined at xi = 0");
    const double scale = std::abs(xi);
    constexpr double s_low = 1e-6;
    std::vector<double> s_edges;
    const double log_top = std::min(4.0, reach);
    const int log_panels = static_cast<int>(std::ceil(std::log(log_top / s_low) / 0.25));
    for (int k = 0; k <= log_panels; ++k)
        s_edges.push_back(s_low * std::exp(std::log(log_top / s_low) * k / log_panels));
    if (reach > 4.0) {
        const int lin_panels = static_cast<int>(std::ceil((reach - 4.0) / 0.5));
        for (int k = 1; k <= lin_panels; ++k) s_edges.push_back(4.0 + (reach - 4.0) * k / lin_panels);
    }
    std::vector<double> t_edges;
    t_edges.reserve(s_edges.size());
    for (double s : s_edges) t_edges.push_back(s / scale);
    std::vector<double> t_breaks;
    for (double s : breakpoints) t_breaks.push_back(s / scale);
    const auto edges = merge_edges(t_edges, t_breaks, t_edges.front(), t_edges.back());

    const GaussRule& rule = gauss_legendre(10);
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        double panel = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t = mid + half * rule.nodes[i];
            panel += rule.weights[i] * spectrum(t * xi) / t;
        }
        total += half * panel;
    }
    return total;
}

template <class Density>
double window_energy(Density&& density, double lo, double hi) {
    const int panels = static_cast<int>(std::ceil((hi - lo) / 0.125));
    std::vector<double> edges(panels + 1);
    for (int k = 0; k <= panels; ++k) edges[k] = lo + (hi - lo) * k / panels;
    std::vector<double> nodes;
    std::vector<double> weights;
    append_composite(edges, 12, nodes, weights);
    double total = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) total += weights[k] * density(nodes[k]);
    return total;
}

SampledFunction sample_on(const LineGrid& grid, auto&& f) {
    std::vector<cplx> values(grid.count());
    for (std::size_t j = 0; j < grid.count(); ++j) values[j] = f(grid.at(j));
    return {grid, std::move(values)};
}

double grid_reach(const LineGrid& freq) {
    return std::min(std::abs(freq.start()), std::abs(freq.back()));
}

std::string format_residual(const std::string& what, double residual) {
    std::ostringstream os;
    os.precision(3);
    os << what << " (achieved residual " << std::scientific << residual << ")";
    return os.str();
}

}  // namespace

WaveletName parse_wavelet_name(std::string_view text) {
    if (text == "shannon") return WaveletName::shannon;
    if (text == "haar") return WaveletName::haar;
    throw std::invalid_argument("unknown wavelet '" + std::string(text) + "' (expected shannon or haar)");
}

WindowName parse_window_name(std::string_view text) {
    if (text == "gaussian") return WindowName::gaussian;
    if (text == "rect") return WindowName::rect;
    throw std::invalid_argument("unknown window '" + std::string(text) + "' (expected gaussian or rect)");
}

Atom::Atom(AtomCase kind, AtomShape shape, std::string name, double normalization, SampledFunction time,
           SampledFunction freq)
    : kind_(kind), shape_(shape), name_(std::move(name)), normalization_(normalization), time_(std::move(time)),
      freq_(std::move(freq)) {}

cplx Atom::time_value(double x) const {
    switch (shape_) {
        case AtomShape::shannon: return shannon_time(normalization_, x);
        case AtomShape::haar: return haar_time(normalization_, x);
        case AtomShape::gaussian: return gaussian_time(normalization_, x);
        case AtomShape::rect: return rect_time(normalization_, x);
        case AtomShape::sampled: return time_.interpolate(x);
    }
    return {};
}

cplx Atom::freq_value(double xi) const {
    switch (shape_) {
        case AtomShape::shannon: return shannon_freq(normalization_, xi);
        case AtomShape::haar: return haar_freq(normalization_, xi);
        case AtomShape::gaussian: return gaussian_time(normalization_, xi);
        case AtomShape::rect: return rect_freq(normalization_, xi);
        case AtomShape::sampled: return freq_.interpolate(xi);
    }
    return {};
}

std::vector<double> Atom::fiber_breakpoints(double omega) const {
    switch (shape_) {
        case AtomShape::shannon:
            if (omega == 0.0) return {};
            return {1.0 / std::abs(omega), 2.0 / std::abs(omega)};
        case AtomShape::rect: return {omega - 1.0, omega};
        default: return {};
    }
}

std::pair<double, double> Atom::fiber_support(double omega) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (kind_ == AtomCase::wavelet) {
        if (omega == 0.0) return {1.0, 0.0};
        const double a = std::abs(omega);
        switch (shape_) {
            case AtomShape::shannon: return {1.0 / a, 2.0 / a};
            case AtomShape::sampled: return {0.0, grid_reach(freq_.grid) / a};
            default: return {0.0, inf};
        }
    }
    switch (shape_) {
        case AtomShape::gaussian: return {omega - kGaussianRadius, omega + kGaussianRadius};
        case AtomShape::rect: return {omega - 1.0, omega};
        case AtomShape::sampled: return {omega - time_.grid.back(), omega - time_.grid.start()};
        default: return {-inf, inf};
    }
}

std::vector<double> Atom::spectral_breakpoints() const {
    if (shape_ == AtomShape::shannon) return {1.0, 2.0};
    return {};
}

double Atom::spectral_reach() const {
    switch (shape_) {
        case AtomShape::shannon: return 2.0;
        case AtomShape::haar: return kHaarReach;
        default: return grid_reach(freq_.grid);
    }
}

Atom Atom::from_samples(AtomCase kind, std::string name, SampledFunction time, double normalization) {
    if (!(normalization > 0.0)) throw std::invalid_argument("Atom: normalization must be positive");
    for (const cplx& v : time.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("Atom: non-finite sample");
        if (kind == AtomCase::wavelet && std::abs(v.imag()) > 1e-12)
            throw std::invalid_argument("Atom: wavelet samples must be real-valued");
    }
    SampledFunction freq = fourier(time, FourierSign::forward);
    Atom atom(kind, AtomShape::sampled, std::move(name), normalization, std::move(time), std::move(freq));
    const double residual = admissibility_residual(atom);
    const double tolerance = kind == AtomCase::wavelet ? kWaveletTolerance : kWindowTolerance;
    if (!(residual <= tolerance))
        throw AdmissibilityError(format_residual("Atom '" + atom.name() + "' is not admissible", residual), residual);
    return atom;
}

LineGrid default_time_grid(WaveletName name) {
    return LineGrid::centered(8.0, name == WaveletName::haar ? 16384 : 1024);
}

LineGrid default_time_grid(WindowName) { return LineGrid::centered(8.0, 1024); }

Atom make_wavelet(WaveletName name, const LineGrid& time_grid) {
    const LineGrid freq_grid = time_grid.dual();
    const double reach = grid_reach(freq_grid);
    if (name == WaveletName::shannon) {
        const double c = shannon_height();
        const double breaks[] = {1.0, 2.0};
        const double captured = reach >= 2.0 ? admissibility_quadrature(
                                                    [c](double s) { return std::norm(shannon_freq(c, s)); }, 1.0,
                                                    breaks, std::min(reach, 2.0))
                                              : 0.0;
        if (!(std::abs(captured - 1.0) <= kWaveletTolerance))
            throw AdmissibilityError(format_residual("shannon: frequency grid does not cover 1 <= |xi| <= 2",
                                                     std::abs(captured - 1.0)),
                                     std::abs(captured - 1.0));
        return Atom(AtomCase::wavelet, AtomShape::shannon, "shannon", c,
                    sample_on(time_grid, [c](double x) { return cplx{shannon_time(c, x), 0.0}; }),
                    sample_on(freq_grid, [c](double xi) { return shannon_freq(c, xi); }));
    }

    auto raw = [](double s) { return std::norm(haar_freq(1.0, s)); };
    const double raw_constant = admissibility_quadrature(raw, 1.0, {}, kHaarReach);
    const double c = 1.0 / std::sqrt(raw_constant);
    const double captured = admissibility_quadrature([c](double s) { return std::norm(haar_freq(c, s)); }, 1.0, {},
                                                     std::min(reach, kHaarReach));
    if (!(std::abs(captured - 1.0) <= kWaveletTolerance))
        throw AdmissibilityError(
            format_residual("haar: frequency grid too narrow for the admissibility tail", std::abs(captured - 1.0)),
            std::abs(captured - 1.0));
    return Atom(AtomCase::wavelet, AtomShape::haar, "haar", c,
                sample_on(time_grid, [c](double x) { return cplx{haar_time(c, x), 0.0}; }),
                sample_on(freq_grid, [c](double xi) { return haar_freq(c, xi); }));
}

Atom make_wavelet(WaveletName name) { return make_wavelet(name, default_time_grid(name)); }

Atom make_window(WindowName name, const LineGrid& time_grid) {
    const LineGrid freq_grid = time_grid.dual();
    const bool gaussian = name == WindowName::gaussian;
    const double raw_energy =
        gaussian ? window_energy([](double x) { return std::exp(-2.0 * kPi * x * x); }, -kGaussianRadius,
                                 kGaussianRadius)
                 : window_energy([](double) { return 1.0; }, 0.0, 1.0);
    const double c = 1.0 / std::sqrt(raw_energy);
    auto time = gaussian ? sample_on(time_grid, [c](double x) { return cplx{gaussian_time(c, x), 0.0}; })
                         : sample_on(time_grid, [c](double x) { return cplx{rect_time(c, x), 0.0}; });
    const double stored = time.norm();
    const double residual = std::abs(stored - 1.0);
    if (!(residual <= kWindowTolerance))
        throw AdmissibilityError(format_residual(std::string(gaussian ? "gaussian" : "rect") +
                                                     ": time grid does not resolve the unit-norm window",
                                                 residual),
                                 residual);
    auto freq = gaussian ? sample_on(freq_grid, [c](double xi) { return cplx{gaussian_time(c, xi), 0.0}; })
                         : sample_on(freq_grid, [c](double xi) { return rect_freq(c, xi); });
    return Atom(AtomCase::gabor, gaussian ? AtomShape::gaussian : AtomShape::rect, gaussian ? "gaussian" : "rect",
                c, std::move(time), std::move(freq));
}

Atom make_window(WindowName name) { return make_window(name, default_time_grid(name)); }

Atom make_atom(AtomCase kind, std::string_view name) {
    if (kind == AtomCase::wavelet) return make_wavelet(parse_wavelet_name(name));
    return make_window(parse_window_name(name));
}

cplx fiber_profile(const Atom& atom, double z, double omega) {
    if (atom.kind() == AtomCase::wavelet) {
        if (!(z > 0.0)) throw std::domain_error("fiber_profile: wavelet scale must be positive");
        return std::sqrt(z) * std::conj(atom.freq_value(z * omega));
    }
    const auto [lo, hi] = atom.fiber_support(omega);
    if (z < lo || z > hi) return {0.0, 0.0};
    return std::conj(atom.time_value(omega - z));
}

double admissibility_integral(const Atom& atom, double xi) {
    if (atom.kind() != AtomCase::wavelet)
        throw std::invalid_argument("admissibility_integral: defined for wavelets only");
    const auto breaks = atom.spectral_breakpoints();
    return admissibility_quadrature([&atom](double s) { return std::norm(atom.freq_value(s)); }, xi, breaks,
                                    atom.spectral_reach());
}

std::vector<double> admissibility_test_frequencies() {
    std::vector<double> xs;
    xs.reserve(64);
    for (int k = 0; k < 32; ++k) {
        // Irrational-looking offsets keep the set away from dyadic points.
        const double x = std::exp2(-4.0 + 8.0 * (k + 0.3819660112501051) / 32.0);
        xs.push_back(x);
        xs.push_back(-x);
    }
    return xs;
}

double admissibility_residual(const Atom& atom) {
    if (atom.kind() == AtomCase::wavelet) {
        double worst = 0.0;
        for (double xi : admissibility_test_frequencies())
            worst = std::max(worst, std::abs(admissibility_integral(atom, xi) - 1.0));
        return worst;
    }
    double energy = 0.0;
    switch (atom.shape()) {
        case AtomShape::gaussian:
            energy = window_energy([&](double x) { return std::norm(atom.time_value(x)); }, -kGaussianRadius,
                                   kGaussianRadius);
            break;
        case AtomShape::rect:
            energy = window_energy([&](double x) { return std::norm(atom.time_value(x)); }, 0.0, 1.0);
            break;
        default: {
            const double n = atom.time_samples().norm();
            energy = n * n;
        }
    }
    return std::abs(std::sqrt(energy) - 1.0);
}

}  // namespace tlo
