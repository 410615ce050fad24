#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "tlo/fourier.hpp"
#include "tlo/quadrature.hpp"
#include "tlo/signals.hpp"

using namespace tlo;
using Catch::Matchers::WithinAbs;

TEST_CASE("centered grids contain the origin and pair with their duals") {
    const LineGrid g = LineGrid::centered(8.0, 256);
    CHECK(g.start() == -8.0);
    CHECK(g.at(128) == 0.0);
    CHECK(g.is_centered());
    const LineGrid d = g.dual();
    CHECK(d.count() == 256);
    CHECK_THAT(d.step() * g.step() * 256.0, WithinAbs(1.0, 1e-15));
    CHECK(d.at(128) == 0.0);
    CHECK(g.pairs_with(d));
    CHECK_FALSE(g.pairs_with(LineGrid::centered(8.0, 128)));
}

TEST_CASE("midpoint grids tile the interval") {
    const LineGrid g = LineGrid::midpoints(-8.0, 8.0, 128);
    CHECK_THAT(g.start(), WithinAbs(-8.0 + 0.0625, 1e-15));
    CHECK_THAT(g.back(), WithinAbs(8.0 - 0.0625, 1e-15));
    for (std::size_t j = 0; j < g.count(); ++j) CHECK(g.at(j) != 0.0);
}

TEST_CASE("sampled functions: norm, inner product, interpolation") {
    const LineGrid g(0.0, 0.5, 5);
    SampledFunction f(g, {1.0, 2.0, 3.0, 4.0, 5.0});
    CHECK_THAT(f.norm(), WithinAbs(std::sqrt(0.5 * 55.0), 1e-14));
    CHECK_THAT(std::real(inner(f, f)), WithinAbs(0.5 * 55.0, 1e-13));
    CHECK(f.interpolate(0.25) == cplx(1.5, 0.0));
    CHECK(f.interpolate(-0.1) == cplx(0.0, 0.0));
    CHECK(f.interpolate(2.1) == cplx(0.0, 0.0));
    CHECK_THROWS(SampledFunction(g, {1.0, 2.0}));
}

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n-1 exactly") {
    for (int order : {1, 2, 5, 8, 16, 32, 64}) {
        const GaussRule& rule = gauss_legendre(order);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));
        for (int k = 0; k < 2 * order; ++k) {
            double sum = 0.0;
            for (int i = 0; i < order; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK_THAT(sum, WithinAbs(exact, 1e-13));
        }
    }
    CHECK_THROWS(gauss_legendre(0));
    CHECK_THROWS(gauss_legendre(65));
}

TEST_CASE("composite rules respect breakpoints") {
    const double base[] = {0.0, 1.0, 2.0};
    const double extra[] = {0.5, 1.0, 3.0};
    const auto edges = merge_edges(base, extra, 0.0, 2.0);
    REQUIRE(edges == std::vector<double>{0.0, 0.5, 1.0, 2.0});
    std::vector<double> nodes, weights;
    append_composite(edges, 2, nodes, weights);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * (nodes[i] < 0.5 ? 1.0 : 0.0);
    CHECK_THAT(sum, WithinAbs(0.5, 1e-15));
}

TEST_CASE("fiber grids integrate the declared measures") {
    // du/u^2 over [1, 4] is 3/4; dq over [-16, 16] is 32.
    const FiberGrid w = FiberGrid::build(FiberDomain(AtomCase::wavelet, 1.0, 4.0, 64), {}, 4);
    double s = 0.0;
    for (double x : w.weights) s += x;
    CHECK_THAT(s, WithinAbs(0.75, 1e-12));
    const FiberGrid g = FiberGrid::build(FiberDomain::defaults(AtomCase::gabor), {}, 2);
    s = 0.0;
    for (double x : g.weights) s += x;
    CHECK_THAT(s, WithinAbs(32.0, 1e-11));

    const ScaleGrid scales = ScaleGrid::defaults();
    s = 0.0;
    for (double x : scales.weights()) s += x;
    CHECK_THAT(s, WithinAbs(std::log(65536.0), 1e-11));
}

TEST_CASE("Fourier transform of the Gaussian is a Gaussian") {
    const LineGrid g = LineGrid::centered(8.0, 256);
    SampledFunction f = SampledFunction::zeros(g);
    for (std::size_t j = 0; j < g.count(); ++j) f.values[j] = std::exp(-oracle::pi * g.at(j) * g.at(j));
    const SampledFunction F = fourier(f, FourierSign::forward);
    for (std::size_t k = 0; k < F.grid.count(); ++k)
        CHECK(std::abs(F.values[k] - std::exp(-oracle::pi * F.grid.at(k) * F.grid.at(k))) < 1e-12);
}

TEST_CASE("forward sign: a modulation moves the peak to +c") {
    const LineGrid g = LineGrid::centered(8.0, 256);
    SampledFunction f = SampledFunction::zeros(g);
    const double c = 1.5;
    for (std::size_t j = 0; j < g.count(); ++j)
        f.values[j] = std::exp(-oracle::pi * g.at(j) * g.at(j)) * std::polar(1.0, 2.0 * oracle::pi * c * g.at(j));
    const SampledFunction F = fourier(f, FourierSign::forward);
    std::size_t best = 0;
    for (std::size_t k = 0; k < F.grid.count(); ++k)
        if (std::abs(F.values[k]) > std::abs(F.values[best])) best = k;
    CHECK_THAT(F.grid.at(best), WithinAbs(c, 1e-12));
}

TEST_CASE("FFT path matches the brute-force Riemann sum on offset grids") {
    const LineGrid in(-3.3, 0.1, 64);
    const LineGrid out(0.7, 1.0 / 6.4, 64);
    const SampledFunction f = random_vector(in, 11);
    for (auto [sign, s] : {std::pair{FourierSign::forward, 1}, {FourierSign::inverse, -1}}) {
        const SampledFunction F = fourier(f, sign, out);
        CHECK(oracle::max_abs_diff(F.values, oracle::brute_fourier(f, out, s)) < 1e-12);
    }
}

TEST_CASE("inverse undoes forward and Parseval holds") {
    const LineGrid in(-5.0, 0.05, 200);
    const SampledFunction f = random_vector(in, 3);
    const SampledFunction F = fourier(f, FourierSign::forward);
    const SampledFunction back = fourier(F, FourierSign::inverse, in);
    CHECK(relative_l2_error(back, f) < 1e-12);
    CHECK_THAT(F.norm() / f.norm(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("unpaired grids are rejected") {
    const LineGrid in = LineGrid::centered(8.0, 64);
    CHECK_THROWS(LineTransform(in, LineGrid::centered(8.0, 64), FourierSign::forward));
}

TEST_CASE("bandlimited test signals have unit norm and the requested band") {
    const LineGrid g = LineGrid::centered(8.0, 512);
    const SampledFunction f = random_bandlimited(g, 5);
    CHECK_THAT(f.norm(), WithinAbs(1.0, 1e-12));
    const SampledFunction F = fourier(f, FourierSign::forward);
    double outside = 0.0;
    for (std::size_t k = 0; k < F.grid.count(); ++k) {
        const double a = std::abs(F.grid.at(k));
        if (a < 0.25 || a > 4.0) outside += std::norm(F.values[k]);
    }
    CHECK(outside < 1e-20);
    const SampledFunction g2 = random_bandlimited(g, 5);
    CHECK(g2.values == f.values);
}
