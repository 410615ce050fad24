#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tlo/grid.hpp"

namespace tlo {

enum class AtomShape { shannon, haar, gaussian, rect, sampled };

enum class WaveletName { shannon, haar };
enum class WindowName { gaussian, rect };

WaveletName parse_wavelet_name(std::string_view text);
WindowName parse_window_name(std::string_view text);

/// Raised when an atom cannot be made admissible on the requested grid.
class AdmissibilityError : public std::runtime_error {
public:
    AdmissibilityError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// An admissible wavelet psi or window phi.
///
/// Catalog atoms evaluate their closed forms exactly; atoms imported from
/// samples interpolate linearly and vanish outside the stored support. Both
/// keep time and frequency samples for export.
class Atom {
public:
    /// Wraps externally produced, already normalized samples. Frequency
    /// samples are computed with `fourier`. Throws AdmissibilityError when the
    /// samples violate admissibility beyond tolerance.
    static Atom from_samples(AtomCase kind, std::string name, SampledFunction time, double normalization);

    AtomCase kind() const noexcept { return kind_; }
    AtomShape shape() const noexcept { return shape_; }
    const std::string& name() const noexcept { return name_; }
    double normalization() const noexcept { return normalization_; }
    const SampledFunction& time_samples() const noexcept { return time_; }
    const SampledFunction& freq_samples() const noexcept { return freq_; }

    /// psi(x) or phi(x).
    cplx time_value(double x) const;
    /// The Fourier transform of the atom at xi.
    cplx freq_value(double xi) const;

    /// Points of G1 where the fiber profile ell(., omega) jumps or kinks.
    std::vector<double> fiber_breakpoints(double omega) const;
    /// Interval of G1 outside which ell(., omega) is zero; empty when lo >= hi.
    std::pair<double, double> fiber_support(double omega) const;

    /// Frequency-side breakpoints of |psi^|^2 (wavelets only).
    std::vector<double> spectral_breakpoints() const;
    /// Largest |xi| at which psi^ is known to be non-negligible (wavelets only).
    double spectral_reach() const;

private:
    Atom(AtomCase kind, AtomShape shape, std::string name, double normalization, SampledFunction time,
         SampledFunction freq);

    AtomCase kind_;
    AtomShape shape_;
    std::string name_;
    double normalization_;
    SampledFunction time_;
    SampledFunction freq_;

    friend Atom make_wavelet(WaveletName, const LineGrid&);
    friend Atom make_window(WindowName, const LineGrid&);
};

/// Default sampling grids: [-8, 8) with 1024 samples, or 16384 for Haar so the
/// stored spectrum reaches |xi| = 512.
LineGrid default_time_grid(WaveletName name);
LineGrid default_time_grid(WindowName name);

/// Shannon: psi^ = (ln 2)^{-1/2} on 1 <= |xi| <= 2. Haar: c (chi[0,1/2) - chi[1/2,1))
/// with c fixed by numerical quadrature of the admissibility integral.
Atom make_wavelet(WaveletName name, const LineGrid& time_grid);
Atom make_wavelet(WaveletName name);

/// Gaussian: 2^{1/4} e^{-pi x^2}. Rect: chi[0,1).
Atom make_window(WindowName name, const LineGrid& time_grid);
Atom make_window(WindowName name);

/// Catalog lookup by name ("shannon", "haar", "gaussian", "rect") checked against the case.
Atom make_atom(AtomCase kind, std::string_view name);

/// Fiber profile: sqrt(u) conj(psi^(u omega)) for wavelets (u > 0 required),
/// conj(phi(omega - q)) for windows.
cplx fiber_profile(const Atom& atom, double z, double omega);

/// Quadrature of int_0^inf |psi^(t xi)|^2 dt / t for xi != 0.
double admissibility_integral(const Atom& atom, double xi);

/// 64 frequencies in +-[2^-4, 2^4] used to validate admissibility.
std::vector<double> admissibility_test_frequencies();

/// Wavelets: max over the test frequencies of |integral - 1|.
/// Windows: | ||phi||_2 - 1 | by quadrature of the closed form.
double admissibility_residual(const Atom& atom);

}  // namespace tlo
