// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "tlo/algebra.hpp"
#include "tlo/io.hpp"
#include "tlo/operators.hpp"
#include "tlo/transforms.hpp"

using namespace tlo;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what, double value) {
        if (!ok) pass = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << " " << value << (ok ? "" : " (!)");
    }
};

double relative(const RowMatrix& a, const RowMatrix& b) { return operator_norm(a - b) / operator_norm(b); }

double off_diagonal_fraction(const RowMatrix& m) {
    return std::sqrt((m.squaredNorm() - m.diagonal().squaredNorm()) / m.squaredNorm());
}

double sup_abs(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& x : v) s = std::max(s, std::abs(x));
    return s;
}

Outcome admissibility() {
    Outcome o;
    const Atom shannon = make_wavelet(WaveletName::shannon);
    double worst = 0.0;
    for (double xi : admissibility_test_frequencies())
        worst = std::max(worst, std::abs(admissibility_integral(shannon, xi) - 1.0));
    o.require(admissibility_test_frequencies().size() == 64, "frequencies", 64);
    o.require(worst <= 1e-10, "shannon max |I-1|", worst);
    const double haar = admissibility_residual(make_wavelet(WaveletName::haar));
    o.require(haar <= 1e-6, "haar residual", haar);
    return o;
}

Outcome factorization() {
    Outcome o;
    for (auto [kind, name] : {std::pair{AtomCase::wavelet, "shannon"}, {AtomCase::gabor, "gaussian"}}) {
        const TransformCheck c = verify_transforms(make_atom(kind, name), 1024, 1, 20, 2e-3);
        o.require(c.factorization_max <= 2e-3, std::string(name) + " factorization", c.factorization_max);
        o.require(c.isometry_max <= 2e-3, std::string(name) + " isometry", c.isometry_max);
    }
    return o;
}

Outcome first_variable() {
    Outcome o;
    const Atom a = make_window(WindowName::gaussian);
    const LineGrid grid = operator_grid(AtomCase::gabor, 256);
    const Profile alpha = Profile::indicator(-1.0, 1.0);
    const OperatorMatrix d = build_direct(a, SymbolSpec::first(alpha), grid);
    const GammaFunction g = gamma_function(a, alpha, grid);
    const double off = off_diagonal_fraction(d.values);
    o.require(off <= 1e-3, "off-diagonal fraction", off);
    const double rel = relative(d.values, build_multiplication(g).values);
    o.require(rel <= 1e-3, "vs diag(gamma)", rel);
    const double at0 = std::abs(g.values[grid.count() / 2].real() - std::erf(std::sqrt(2.0 * kPi)));
    o.require(grid.at(grid.count() / 2) == 0.0 && at0 <= 1e-6, "|gamma(0) - erf|", at0);
    return o;
}

Outcome norm_equals_sup() {
    Outcome o;
    for (auto [kind, name, alpha] : {std::tuple{AtomCase::gabor, "gaussian", Profile::indicator(-1.0, 1.0)},
                                     {AtomCase::gabor, "rect", Profile::gaussian(0.5, 2.0)},
                                     {AtomCase::wavelet, "shannon", Profile::indicator(0.5, 2.0)},
                                     {AtomCase::wavelet, "haar", Profile::cosine(1.0, 0.75)}}) {
        const Atom a = make_atom(kind, name);
        const LineGrid grid = operator_grid(kind, 128);
        const double norm = operator_norm(build_direct(a, SymbolSpec::first(alpha), grid).values);
        const double sup = sup_abs(gamma_function(a, alpha, grid).values);
        o.require(std::abs(norm - sup) <= 1e-3 * sup, std::string(name) + " rel", std::abs(norm - sup) / sup);
    }
    return o;
}

// Eigenvalues of the direct matrix against the range of gamma sampled 16x finer.
double spectrum_distance(const Atom& a, const Profile& alpha, std::size_t n) {
    const LineGrid grid = operator_grid(a.kind(), n);
    const SpectrumResult s = spectrum(build_direct(a, SymbolSpec::first(alpha), grid));
    const GammaFunction fine = gamma_function(a, alpha, operator_grid(a.kind(), 16 * n));
    return hausdorff_distance(s.eigenvalues, fine.values);
}

Outcome spectrum_equals_range() {
    Outcome o;
    const Atom a = make_window(WindowName::gaussian);
    const Profile alpha = Profile::gaussian(0.0, 8.0);
    const double h256 = spectrum_distance(a, alpha, 256);
    const double h512 = spectrum_distance(a, alpha, 512);
    o.require(h256 <= 1e-2, "H(256)", h256);
    o.require(h512 / h256 <= 0.55, "H(512)/H(256)", h512 / h256);
    return o;
}

Outcome second_variable() {
    Outcome o;
    for (auto [kind, name] : {std::pair{AtomCase::gabor, "gaussian"}, {AtomCase::wavelet, "shannon"}}) {
        const Atom a = make_atom(kind, name);
        const LineGrid grid = operator_grid(kind, 128);
        const Profile beta = Profile::gaussian(0.0, 2.0);
        const double rel = relative(build_integral(a, beta, grid).values,
                                    build_direct(a, SymbolSpec::second(beta), grid).values);
        o.require(rel <= 5e-3, std::string(name) + " integral vs direct", rel);

        const CalculusOptions options = CalculusOptions::defaults(kind);
        const KernelMatrix k = overlap_kernel(a, grid, options);
        double diag = 0.0;
        for (std::size_t i = 0; i < grid.count(); ++i)
            if (in_healthy_band(options.domain, grid.at(i)))
                diag = std::max(diag, std::abs(k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) - 1.0));
        o.require(diag <= 1e-6, std::string(name) + " |b(xi,xi)-1|", diag);
        const double herm = (k.values - k.values.adjoint()).cwiseAbs().maxCoeff();
        o.require(herm <= 1e-10, std::string(name) + " hermitian defect", herm);
        if (kind == AtomCase::gabor) {
            double worst = 0.0;
            for (std::size_t i = 0; i < grid.count(); ++i)
                for (std::size_t j = 0; j < grid.count(); ++j) {
                    const double d = grid.at(i) - grid.at(j);
                    worst = std::max(worst, std::abs(k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                                     std::exp(-kPi * d * d / 2.0)));
                }
            o.require(worst <= 1e-8, "gaussian kernel vs exp(-pi d^2/2)", worst);
        }
    }
    return o;
}

Outcome separable() {
    Outcome o;
    for (auto [kind, name, alpha] : {std::tuple{AtomCase::gabor, "gaussian", Profile::indicator(-1.0, 1.0)},
                                     {AtomCase::wavelet, "shannon", Profile::indicator(0.5, 2.0)}}) {
        const Atom a = make_atom(kind, name);
        const LineGrid grid = operator_grid(kind, 128);
        const Profile beta = Profile::gaussian(0.0, 4.0);
        const RowMatrix direct = build_direct(a, SymbolSpec::separable(alpha, beta), grid).values;
        const double rel = relative(build_pseudodiff(a, alpha, beta, grid).values, direct);
        o.require(rel <= 5e-3, std::string(name) + " pseudodiff vs direct", rel);
        const double r1 = relative(build_pseudodiff(a, alpha, Profile::constant(1.0), grid).values,
                                   build_multiplication(gamma_function(a, alpha, grid)).values);
        o.require(r1 <= 2e-3, std::string(name) + " beta=1", r1);
        const double r2 = relative(build_pseudodiff(a, Profile::constant(1.0), beta, grid).values,
                                   build_integral(a, beta, grid).values);
        o.require(r2 <= 1e-6, std::string(name) + " alpha=1", r2);

        const KernelMatrix k = compound_kernel(a, alpha, grid);
        const GammaFunction g = gamma_function(a, alpha, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.count(); ++i)
            worst = std::max(worst, std::abs(k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -
                                             g.values[i]));
        o.require(worst <= 1e-8, std::string(name) + " |Gamma(x,x)-gamma(x)|", worst);
    }
    return o;
}

Outcome algebra() {
    Outcome o;
    for (auto [kind, name] : {std::pair{AtomCase::gabor, "gaussian"}, {AtomCase::wavelet, "shannon"}}) {
        const Atom a = make_atom(kind, name);
        const AlgebraCheck c = verify_algebra(a, 128, 1);
        o.require(c.commutator_max <= 5e-3, std::string(name) + " commutator", c.commutator_max);
        if (c.semi_commutator_sup)
            o.require(std::abs(*c.semi_commutator_sup - 0.25) <= 1e-6, "semi-commutator sup", *c.semi_commutator_sup);
        const double simplex = gamma_vector(a, default_partition(kind), operator_grid(kind, 128)).simplex_defect();
        o.require(simplex <= 1e-6, std::string(name) + " simplex defect", simplex);
        o.require(c.tau_isometry_max <= 2e-3, std::string(name) + " tau", c.tau_isometry_max);
    }
    return o;
}

Outcome unbounded_symbol() {
    Outcome o;
    const Atom a = make_wavelet(WaveletName::shannon);
    const Profile inverse = Profile::power(-1.0);
    const CalculusOptions defaults = CalculusOptions::defaults(AtomCase::wavelet);
    const LineGrid grid = LineGrid::midpoints(-4.0, 4.0, 256);
    const GammaFunction g = gamma_function(a, inverse, grid, defaults);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.count(); ++i)
        if (in_healthy_band(defaults.domain, grid.at(i)))
            worst = std::max(worst, std::abs(g.values[i].real() - std::abs(grid.at(i)) / (2.0 * kLn2)));
    o.require(worst <= 1e-8, "max |gamma - |xi|/(2 ln 2)|", worst);

    // Scale range wide enough that the largest |xi| below is still resolved.
    const CalculusOptions wide{FiberDomain(AtomCase::wavelet, std::ldexp(1.0, -16), std::ldexp(1.0, 8), 192), 8};
    for (double bound : {10.0, 100.0}) {
        double reach = 4.0;
        bool reached = false;
        while (reach <= 4096.0 && !reached) {
            const LineGrid g2 = LineGrid::midpoints(-reach, reach, 256);
            const SpectrumReport r =
                spectrum_from_gamma(gamma_function(a, inverse, g2, wide), true, inverse.bound());
            if (r.verdict == "unbounded on sampled range" && r.norm > bound) reached = true;
            else reach *= 2.0;
        }
        o.require(reached, "xi max past bound " + std::to_string(static_cast<int>(bound)), reach);
    }
    const Profile ind = Profile::indicator(0.5, 2.0);
    const SpectrumReport b = spectrum_from_gamma(gamma_function(a, ind, LineGrid::midpoints(-256.0, 256.0, 256), wide),
                                                 true, ind.bound());
    o.require(b.bounded, "indicator stays bounded", b.norm);
    return o;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + TLO_BINARY + "\" " + args + " >>\"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "tlo_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path log = dir / "log.txt";
    auto p = [&](const char* name) { return (dir / name).string(); };

    const std::string gamma = "gamma --case wavelet --atom haar --symbol indicator:0.5,2 --n 128 --seed 7 --out ";
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");
    const bool ran = run_cli(gamma + p("a/g.csv"), log) == 0 && run_cli(gamma + p("b/g.csv"), log) == 0;
    const bool same = ran && read_text_file(dir / "a/g.csv") == read_text_file(dir / "b/g.csv") &&
                      read_text_file(dir / "a/g.json") == read_text_file(dir / "b/g.json");
    o.require(same, "gamma byte-identical", same);

    const std::string verify = "verify cto3 --n 128 --seed 3 --out ";
    const int v1 = run_cli(verify + p("a/r.json"), log);
    const int v2 = run_cli(verify + p("b/r.json"), log);
    const bool reports_same = read_text_file(dir / "a/r.json") == read_text_file(dir / "b/r.json");
    o.require(v1 == 0 && v2 == 0 && reports_same, "verify cto3 exit", v1);
    const int strict = run_cli("verify cto3 --n 128 --seed 3 --tolerance 0 --out " + p("r3.json"), log);
    o.require(strict == 1 && fs::exists(dir / "r3.json"), "failing verify exit", strict);

    const int bad = run_cli("gamma --case gabor --symbol indicator:1 --out " + p("bad.csv"), log);
    const bool clean = !fs::exists(dir / "bad.csv") && !fs::exists(dir / "bad.json");
    o.require(bad != 0 && clean, "malformed symbol exit", bad);
    const int nowhere = run_cli("gamma --case gabor --out " + p("missing/out.csv"), log);
    o.require(nowhere != 0 && !fs::exists(dir / "missing"), "unwritable output exit", nowhere);
    fs::remove_all(dir);
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"admissibility", admissibility},
        {"transform factorization", factorization},
        {"first-variable diagonalization", first_variable},
        {"norm equals sup of gamma", norm_equals_sup},
        {"spectrum equals range of gamma", spectrum_equals_range},
        {"second-variable integral operator", second_variable},
        {"separable pseudodifferential operator", separable},
        {"commutative algebra", algebra},
        {"unbounded symbol", unbounded_symbol},
        {"determinism and contracts", determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::printf("%s %2d %s [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", index, name, seconds, o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
