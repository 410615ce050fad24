#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "tlo/fourier.hpp"
#include "tlo/signals.hpp"
#include "tlo/transforms.hpp"

using namespace tlo;
using Catch::Matchers::WithinAbs;

namespace {

const LineGrid kSignalGrid = LineGrid::centered(8.0, 1024);

double field_diff(const PhasePlaneField& a, const PhasePlaneField& b) {
    PhasePlaneField d = a;
    d.values -= b.values;
    return d.norm();
}

// A function on the fiber-side grid supported where fiber norms are healthy.
SampledFunction healthy_function(AtomCase kind, const LineGrid& grid, std::uint64_t seed) {
    SampledFunction f = random_vector(grid, seed);
    for (std::size_t j = 0; j < grid.count(); ++j) {
        const double a = std::abs(grid.at(j));
        const bool keep = kind == AtomCase::wavelet ? (a >= 0.25 && a <= 4.0) : a <= 4.0;
        if (!keep) f.values[j] = 0.0;
    }
    return f;
}

}  // namespace

TEST_CASE("analysis of the zero signal is the zero field") {
    const Atom a = make_wavelet(WaveletName::shannon);
    const PhasePlaneField w = analyze(a, SampledFunction::zeros(kSignalGrid), default_fiber_grid(AtomCase::wavelet));
    CHECK(w.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("analysis is an isometry on bandlimited signals") {
    for (auto [kind, name] : {std::pair{AtomCase::wavelet, "shannon"}, {AtomCase::wavelet, "haar"},
                              {AtomCase::gabor, "gaussian"}, {AtomCase::gabor, "rect"}}) {
        const Atom a = make_atom(kind, name);
        const FiberGrid g1 = default_fiber_grid(kind);
        for (std::uint64_t s = 0; s < 5; ++s) {
            const SampledFunction f = random_bandlimited(kSignalGrid, 100 + s);
            CHECK_THAT(analyze(a, f, g1).norm(), WithinAbs(f.norm(), 2e-3));
        }
    }
}

TEST_CASE("ambiguity function of the Gaussian window against brute-force inner products") {
    const Atom a = make_window(WindowName::gaussian);
    SampledFunction phi = SampledFunction::zeros(kSignalGrid);
    for (std::size_t j = 0; j < kSignalGrid.count(); ++j) phi.values[j] = a.time_value(kSignalGrid.at(j));
    const FiberGrid g1 = default_fiber_grid(AtomCase::gabor);
    const PhasePlaneField w = analyze(a, phi, g1);
    const LineGrid fine = LineGrid::centered(10.0, 8192);
    int checked = 0;
    for (std::size_t k = 200; k < 312 && checked < 32; k += 7) {
        for (std::size_t m = 500; m < 524 && checked < 32; m += 11) {
            const double q = g1.nodes[k];
            const double p = w.g2.at(m);
            cplx brute{0.0, 0.0};
            for (std::size_t j = 0; j < fine.count(); ++j) {
                const double x = fine.at(j);
                brute += a.time_value(x) * std::conj(std::polar(1.0, 2.0 * oracle::pi * p * x) * a.time_value(x - q));
            }
            brute *= fine.step();
            const cplx got = w.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
            CHECK(std::abs(got - brute) <= 1e-6);
            CHECK_THAT(std::abs(got), WithinAbs(std::exp(-oracle::pi * (q * q + p * p) / 2.0), 1e-6));
            ++checked;
        }
    }
    CHECK(checked == 32);
}

TEST_CASE("the fiber Fourier step is unitary and invertible") {
    for (AtomCase kind : {AtomCase::wavelet, AtomCase::gabor}) {
        const Atom a = make_atom(kind, kind == AtomCase::wavelet ? "shannon" : "gaussian");
        const PhasePlaneField w = analyze(a, random_bandlimited(kSignalGrid, 9), default_fiber_grid(kind));
        const PhasePlaneField u = fiber_fourier(w, Direction::forward);
        CHECK(u.domain == FieldDomain::fiber);
        CHECK_THAT(u.norm(), WithinAbs(w.norm(), 1e-10));
        const PhasePlaneField back = fiber_fourier(u, Direction::backward);
        CHECK(field_diff(back, w) <= 1e-10);
    }
}

TEST_CASE("wavelet forward step sends a pure modulation to one column") {
    const Atom a = make_wavelet(WaveletName::shannon);
    const FiberGrid g1 = default_fiber_grid(AtomCase::wavelet);
    PhasePlaneField f = PhasePlaneField::zeros(AtomCase::wavelet, FieldDomain::analysis, g1, kSignalGrid, kSignalGrid.dual());
    const double c = f.partner.at(600);
    for (Eigen::Index k = 0; k < f.values.rows(); ++k)
        for (Eigen::Index j = 0; j < f.values.cols(); ++j)
            f.values(k, j) = std::exp(-static_cast<double>(k) / 100.0) *
                             std::polar(1.0, 2.0 * oracle::pi * c * kSignalGrid.at(static_cast<std::size_t>(j)));
    const PhasePlaneField u = fiber_fourier(f, Direction::forward);
    const double total = u.values.squaredNorm();
    CHECK(u.values.col(600).squaredNorm() / total > 1.0 - 1e-12);
}

TEST_CASE("embedding is isometric and projection undoes it") {
    for (auto [kind, name] : {std::pair{AtomCase::wavelet, "shannon"}, {AtomCase::gabor, "gaussian"}}) {
        const Atom a = make_atom(kind, name);
        const FiberGrid g1 = default_fiber_grid(kind);
        const SampledFunction f = healthy_function(kind, LineGrid::centered(8.0, 256), 4);
        const PhasePlaneField q = embed_fibers(a, f, g1);
        CHECK_THAT(q.norm(), WithinAbs(f.norm(), 1e-6 * f.norm()));
        CHECK(relative_l2_error(project_fibers(a, q), f) <= 1e-6);
        CHECK(project_fibers(a, embed_fibers(a, SampledFunction::zeros(f.grid), g1)).norm() == 0.0);
    }
}

TEST_CASE("projection kills profiles orthogonal to the fiber") {
    const Atom a = make_window(WindowName::gaussian);
    const FiberGrid g1 = default_fiber_grid(AtomCase::gabor);
    const LineGrid grid = LineGrid::centered(4.0, 64);
    PhasePlaneField f = PhasePlaneField::zeros(AtomCase::gabor, FieldDomain::fiber, g1, grid, grid.dual());
    // (q - omega) ell(q, omega) is odd about the center of the even profile.
    for (std::size_t k = 0; k < g1.size(); ++k)
        for (std::size_t j = 0; j < grid.count(); ++j)
            f.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
                (g1.nodes[k] - grid.at(j)) * fiber_profile(a, g1.nodes[k], grid.at(j));
    CHECK(project_fibers(a, f).norm() < 1e-6);
}

TEST_CASE("Q Q* is an idempotent self-adjoint projection") {
    const Atom a = make_wavelet(WaveletName::shannon);
    const FiberGrid g1 = default_fiber_grid(AtomCase::wavelet);
    const LineGrid grid = LineGrid::centered(4.0, 64);
    auto random_field = [&](std::uint64_t seed) {
        PhasePlaneField f = PhasePlaneField::zeros(AtomCase::wavelet, FieldDomain::fiber, g1, grid, grid.dual());
        for (Eigen::Index k = 0; k < f.values.rows(); ++k) {
            const SampledFunction r = random_vector(grid, seed * 7919 + static_cast<std::uint64_t>(k));
            for (Eigen::Index j = 0; j < f.values.cols(); ++j) f.values(k, j) = r.values[static_cast<std::size_t>(j)];
        }
        return f;
    };
    auto lambda = [&](const PhasePlaneField& f) { return embed_fibers(a, project_fibers(a, f), g1, f.partner); };
    for (std::uint64_t s = 0; s < 3; ++s) {
        const PhasePlaneField x = random_field(2 * s + 1);
        const PhasePlaneField y = random_field(2 * s + 2);
        const PhasePlaneField lx = lambda(x);
        CHECK(field_diff(lambda(lx), lx) <= 1e-8 * lx.norm());
        CHECK(std::abs(lx.inner(y) - x.inner(lambda(y))) <= 1e-8);
    }
}

TEST_CASE("bargmann after analysis gives the spectrum (wavelet) or the signal (window)") {
    const Atom s = make_wavelet(WaveletName::shannon);
    const Atom g = make_window(WindowName::gaussian);
    for (std::uint64_t t = 0; t < 5; ++t) {
        const SampledFunction f = random_bandlimited(kSignalGrid, 40 + t);
        const SampledFunction fw = bargmann(s, analyze(s, f, default_fiber_grid(AtomCase::wavelet)));
        CHECK(relative_l2_error(fw, fourier(f, FourierSign::forward)) <= 2e-3);
        CHECK(relative_l2_error(fw, f) > 0.5);
        const SampledFunction fg = bargmann(g, analyze(g, f, default_fiber_grid(AtomCase::gabor)));
        CHECK(relative_l2_error(fg, f) <= 2e-3);
        CHECK(relative_l2_error(fg, fourier(f, FourierSign::forward)) > 0.5);
        CHECK_THAT(fg.norm(), WithinAbs(f.norm(), 2e-3));
    }
}

TEST_CASE("R R* is the identity and R* R is a projection") {
    for (auto [kind, name] : {std::pair{AtomCase::wavelet, "shannon"}, {AtomCase::gabor, "gaussian"}}) {
        const Atom a = make_atom(kind, name);
        const FiberGrid g1 = default_fiber_grid(kind);
        const SampledFunction f = healthy_function(kind, LineGrid::centered(8.0, 256), 12);
        CHECK(relative_l2_error(bargmann(a, bargmann_adjoint(a, f, g1)), f) <= 1e-6);
        CHECK(bargmann(a, bargmann_adjoint(a, SampledFunction::zeros(f.grid), g1)).norm() == 0.0);

        const PhasePlaneField w = analyze(a, random_vector(LineGrid::centered(8.0, 256), 5), g1);
        const PhasePlaneField once = bargmann_adjoint(a, bargmann(a, w), g1, w.g2);
        const PhasePlaneField twice = bargmann_adjoint(a, bargmann(a, once), g1, w.g2);
        CHECK(field_diff(twice, once) <= 1e-8 * once.norm());
    }
}

TEST_CASE("fiber norms are one across the documented range") {
    const LineGrid omegas = LineGrid::centered(4.0, 128);
    for (auto [kind, name] : {std::pair{AtomCase::wavelet, "shannon"}, {AtomCase::gabor, "gaussian"}}) {
        const Atom a = make_atom(kind, name);
        const auto pts = omegas.points();
        const auto norms = fiber_norms(a, default_fiber_grid(kind), pts);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (kind == AtomCase::wavelet && std::abs(pts[j]) < 1.0 / 16.0) continue;
            CHECK_THAT(norms[j], WithinAbs(1.0, 1e-6));
        }
    }
}

TEST_CASE("the verification suite passes at defaults") {
    for (auto [kind, name] : {std::pair{AtomCase::wavelet, "shannon"}, {AtomCase::gabor, "gaussian"}}) {
        const TransformCheck c = verify_transforms(make_atom(kind, name), 1024, 1);
        CHECK(c.pass);
        CHECK(c.signals == 20);
        CHECK(c.factorization_max <= 2e-3);
        CHECK(c.isometry_max <= 2e-3);
    }
}
