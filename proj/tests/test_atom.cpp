#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "tlo/atom.hpp"
#include "tlo/fourier.hpp"

using namespace tlo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// int_0^inf |psi^(t xi)|^2 dt / t, evaluated in s = t |xi| with adaptive quadrature.
double admissibility_oracle(const Atom& a, double xi) {
    const double sgn = xi > 0 ? 1.0 : -1.0;
    auto g = [&](double s) { return std::norm(a.freq_value(sgn * s)) / s; };
    double total = 0.0;
    for (double lo = 1e-9; lo < 1.0; lo *= 2.0) total += oracle::integrate(g, lo, std::min(1.0, 2.0 * lo), 1e-13, 8);
    // One panel per period of sin^4(pi s / 2) beyond s = 1.
    total += oracle::integrate(g, 1.0, 2.0, 1e-13, 8);
    for (double lo = 2.0; lo < 4096.0; lo += 2.0) total += oracle::integrate(g, lo, lo + 2.0, 1e-13, 8);
    return total;
}

}  // namespace

TEST_CASE("Shannon wavelet is admissible with the closed-form constant") {
    const Atom a = make_wavelet(WaveletName::shannon);
    CHECK_THAT(a.normalization(), WithinRel(1.0 / std::sqrt(oracle::ln2), 1e-15));
    const auto freqs = admissibility_test_frequencies();
    REQUIRE(freqs.size() == 64);
    for (double xi : freqs) {
        CHECK(xi != 0.0);
        CHECK_THAT(admissibility_integral(a, xi), WithinAbs(1.0, 1e-10));
    }
    CHECK(admissibility_residual(a) <= 1e-10);
}

TEST_CASE("Shannon closed forms agree with each other") {
    const Atom a = make_wavelet(WaveletName::shannon);
    const double c = a.normalization();
    CHECK(a.freq_value(1.5) == cplx(c, 0.0));
    CHECK(a.freq_value(-1.5) == cplx(c, 0.0));
    CHECK(a.freq_value(0.5) == cplx(0.0, 0.0));
    CHECK(a.freq_value(2.5) == cplx(0.0, 0.0));
    // psi(x) = 2 c int_1^2 cos(2 pi x xi) d xi
    for (double x : {0.0, 0.13, -0.7, 2.4}) {
        const double ref = 2.0 * c * oracle::integrate([x](double s) { return std::cos(2.0 * oracle::pi * x * s); }, 1.0, 2.0);
        CHECK_THAT(a.time_value(x).real(), WithinAbs(ref, 1e-12));
    }
}

TEST_CASE("Haar normalization matches the analytic admissibility constant") {
    // int_0^inf 4 sin^4(pi s / 2) / (pi^2 s^3) ds = ln 2, so c = (ln 2)^{-1/2};
    // the stored value comes from a truncated numerical integral.
    const Atom a = make_wavelet(WaveletName::haar);
    CHECK_THAT(a.normalization(), WithinAbs(1.0 / std::sqrt(oracle::ln2), 1e-8));
    CHECK(admissibility_residual(a) <= 1e-6);
    for (double xi : {0.1, -0.3, 1.0, 7.0}) CHECK_THAT(admissibility_oracle(a, xi), WithinAbs(1.0, 1e-6));
}

TEST_CASE("Haar time and frequency forms are a Fourier pair") {
    const Atom a = make_wavelet(WaveletName::haar);
    const double c = a.normalization();
    CHECK(a.time_value(0.25) == cplx(c, 0.0));
    CHECK(a.time_value(0.75) == cplx(-c, 0.0));
    CHECK(a.time_value(1.25) == cplx(0.0, 0.0));
    for (double xi : {0.3, -1.7, 2.0}) {
        const double re = oracle::integrate([&](double x) { return a.time_value(x).real() * std::cos(2 * oracle::pi * x * xi); }, 0.0, 0.5) +
                          oracle::integrate([&](double x) { return a.time_value(x).real() * std::cos(2 * oracle::pi * x * xi); }, 0.5, 1.0);
        const double im = -oracle::integrate([&](double x) { return a.time_value(x).real() * std::sin(2 * oracle::pi * x * xi); }, 0.0, 0.5) -
                          oracle::integrate([&](double x) { return a.time_value(x).real() * std::sin(2 * oracle::pi * x * xi); }, 0.5, 1.0);
        CHECK(std::abs(a.freq_value(xi) - cplx(re, im)) < 1e-12);
    }
}

TEST_CASE("windows have unit norm and the expected transforms") {
    const Atom g = make_window(WindowName::gaussian);
    CHECK_THAT(g.normalization(), WithinRel(std::pow(2.0, 0.25), 1e-15));
    CHECK(admissibility_residual(g) <= 1e-10);
    for (double xi : {0.0, 0.5, -1.2})
        CHECK(std::abs(g.freq_value(xi) - std::pow(2.0, 0.25) * std::exp(-oracle::pi * xi * xi)) < 1e-14);

    const Atom r = make_window(WindowName::rect);
    CHECK(admissibility_residual(r) <= 1e-10);
    for (double xi : {0.3, -2.5}) {
        const cplx ref = (1.0 - std::polar(1.0, -2.0 * oracle::pi * xi)) / cplx(0.0, 2.0 * oracle::pi * xi);
        CHECK(std::abs(r.freq_value(xi) - ref) < 1e-14);
    }
    CHECK(std::abs(r.freq_value(0.0) - 1.0) < 1e-14);
}

TEST_CASE("fiber profiles have unit norm in the first variable") {
    const Atom s = make_wavelet(WaveletName::shannon);
    for (double omega : {0.1, -0.5, 3.0}) {
        // int |ell(u, omega)|^2 du / u^2 = int |psi^(u omega)|^2 du / u
        const auto [lo, hi] = s.fiber_support(omega);
        const double n = oracle::integrate([&](double u) { return std::norm(fiber_profile(s, u, omega)) / (u * u); }, lo, hi);
        CHECK_THAT(n, WithinAbs(1.0, 1e-12));
        CHECK(fiber_profile(s, 0.5 * lo, omega) == cplx(0.0, 0.0));
    }
    const Atom g = make_window(WindowName::gaussian);
    for (double omega : {0.0, 2.5}) {
        const double n = oracle::integrate([&](double q) { return std::norm(fiber_profile(g, q, omega)); }, omega - 10, omega + 10);
        CHECK_THAT(n, WithinAbs(1.0, 1e-12));
    }
    CHECK(fiber_profile(g, 1.0, 0.5) == std::conj(g.time_value(-0.5)));
}

TEST_CASE("fiber supports") {
    const Atom s = make_wavelet(WaveletName::shannon);
    auto [lo, hi] = s.fiber_support(-2.0);
    CHECK(lo == 0.5);
    CHECK(hi == 1.0);
    auto [zlo, zhi] = s.fiber_support(0.0);
    CHECK(zlo >= zhi);
    const Atom r = make_window(WindowName::rect);
    auto [rlo, rhi] = r.fiber_support(3.0);
    CHECK(rlo == 2.0);
    CHECK(rhi == 3.0);
}

TEST_CASE("catalog lookup checks the case") {
    CHECK(make_atom(AtomCase::wavelet, "haar").name() == "haar");
    CHECK(make_atom(AtomCase::gabor, "rect").name() == "rect");
    CHECK_THROWS(make_atom(AtomCase::gabor, "shannon"));
    CHECK_THROWS(make_atom(AtomCase::wavelet, "morlet"));
}

TEST_CASE("sampled atoms are validated") {
    const Atom g = make_window(WindowName::gaussian);
    const Atom copy = Atom::from_samples(AtomCase::gabor, "copy", g.time_samples(), g.normalization());
    CHECK(copy.shape() == AtomShape::sampled);
    CHECK(std::abs(copy.time_value(0.3) - g.time_value(0.3)) < 1e-3);

    SampledFunction doubled = g.time_samples();
    for (cplx& v : doubled.values) v *= 2.0;
    CHECK_THROWS_AS(Atom::from_samples(AtomCase::gabor, "doubled", doubled, 1.0), AdmissibilityError);

    SampledFunction broken = g.time_samples();
    broken.values[10] = cplx(std::nan(""), 0.0);
    CHECK_THROWS(Atom::from_samples(AtomCase::gabor, "broken", broken, 1.0));

    const Atom s = make_wavelet(WaveletName::shannon);
    SampledFunction complex_wavelet = s.time_samples();
    for (cplx& v : complex_wavelet.values) v *= cplx(0.0, 1.0);
    CHECK_THROWS(Atom::from_samples(AtomCase::wavelet, "imaginary", complex_wavelet, 1.0));
}

TEST_CASE("stored samples are consistent with the closed forms") {
    for (const Atom& a : {make_wavelet(WaveletName::shannon), make_window(WindowName::gaussian)}) {
        const SampledFunction& f = a.freq_samples();
        for (std::size_t k = 0; k < f.grid.count(); k += 7) CHECK(f.values[k] == a.freq_value(f.grid.at(k)));
        const SampledFunction& t = a.time_samples();
        for (std::size_t j = 0; j < t.grid.count(); j += 7) CHECK(t.values[j] == a.time_value(t.grid.at(j)));
    }
    const Atom g = make_window(WindowName::gaussian);
    const Atom copy = Atom::from_samples(AtomCase::gabor, "copy", g.time_samples(), g.normalization());
    CHECK(relative_l2_error(fourier(copy.time_samples(), FourierSign::forward), copy.freq_samples()) < 1e-14);
}
