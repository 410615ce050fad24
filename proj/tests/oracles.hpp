#pragma once

// Reference computations for the tests, written independently of the library
// code paths they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tlo/grid.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr double ln2 = std::numbers::ln2;

/// Adaptive Gauss-Kronrod integral of a real function.
template <class F>
double integrate(F f, double a, double b, double tol = 1e-13, unsigned max_depth = 30) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol);
}

/// O(N^2) Riemann sum of the Fourier integral: sum_j f(x_j) e^{-+2 pi i x_j xi_k} dx.
inline std::vector<cplx> brute_fourier(const tlo::SampledFunction& f, const tlo::LineGrid& out, int sign) {
    std::vector<cplx> result(out.count());
    for (std::size_t k = 0; k < out.count(); ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < f.grid.count(); ++j)
            acc += f.values[j] * std::polar(1.0, sign * -2.0 * pi * f.grid.at(j) * out.at(k));
        result[k] = acc * f.grid.step();
    }
    return result;
}

/// Gabor case, Gaussian window 2^{1/4} e^{-pi x^2}, indicator of [a, b]:
/// integral of sqrt(2) e^{-2 pi (q - xi)^2} over [a, b].
inline double gaussian_indicator_gamma(double a, double b, double xi) {
    const double s = std::sqrt(2.0 * pi);
    return 0.5 * (std::erf(s * (b - xi)) - std::erf(s * (a - xi)));
}

/// Gabor case, Gaussian window, symbol e^{-pi (r / w)^2}: Gaussian convolution.
inline double gaussian_gaussian_gamma(double w, double xi) {
    const double a = 1.0 / (w * w);
    const double b = 2.0;
    return std::sqrt(2.0) / std::sqrt(a + b) * std::exp(-pi * a * b / (a + b) * xi * xi);
}

/// Length of [a, b] intersected with [c, d] in the logarithmic variable.
inline double log_overlap(double a, double b, double c, double d) {
    const double lo = std::max(a, c);
    const double hi = std::min(b, d);
    return hi > lo ? std::log(hi / lo) : 0.0;
}

/// Shannon wavelet, indicator of scales [a, b]: (1 / ln 2) times the log
/// length of [a, b] within [1/|xi|, 2/|xi|].
inline double shannon_indicator_gamma(double a, double b, double xi) {
    const double x = std::abs(xi);
    return log_overlap(a, b, 1.0 / x, 2.0 / x) / ln2;
}

/// Shannon overlap kernel: shared log length of the two scale supports.
inline double shannon_overlap(double xi, double omega) {
    const double x = std::abs(xi);
    const double w = std::abs(omega);
    return log_overlap(1.0 / x, 2.0 / x, 1.0 / w, 2.0 / w) / ln2;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace oracle
