#include "tlo/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tlo/algebra.hpp"
#include "tlo/io.hpp"
#include "tlo/operators.hpp"
#include "tlo/symbol.hpp"
#include "tlo/symbol_calculus.hpp"
#include "tlo/transforms.hpp"

namespace tlo::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::size_t kOperatorCap = OperatorOptions::max_default_size;
constexpr std::size_t kSampleCap = 65536;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string kind_text = "gabor";
    std::string atom;
    std::string symbol;
    std::string beta;
    std::optional<std::size_t> n;
    std::optional<double> xi_min;
    std::optional<double> xi_max;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    bool allow_large = false;

    AtomCase kind() const { return parse_atom_case(kind_text); }
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string table_csv(const Table& t) {
    CsvBuilder csv(t.header);
    for (const auto& r : t.rows) csv.row(r);
    return csv.str();
}

json table_json(const Table& t) { return {{"columns", t.header}, {"rows", t.rows}}; }

Table complex_table(const char* axis, const LineGrid& grid, const std::vector<cplx>& values) {
    Table t{{axis, "re", "im"}, {}};
    t.rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) t.rows.push_back({grid.at(i), values[i].real(), values[i].imag()});
    return t;
}

Table signal_table(const SampledFunction& f) { return complex_table("x", f.grid, f.values); }

fs::path sidecar_path(const fs::path& out) {
    fs::path p = out;
    p.replace_extension(".json");
    return p;
}

fs::path extra_path(const fs::path& out, const std::string& name) {
    fs::path p = out;
    p.replace_extension("." + name + ".csv");
    return p;
}

/// Writes the main table and any extra tables as CSV with a JSON sidecar, or
/// everything as one JSON document.
void emit(const RunConfig& cfg, const Table& main, json meta,
          const std::vector<std::pair<std::string, Table>>& extras = {}) {
    const fs::path out(cfg.out);
    std::vector<std::pair<fs::path, std::string>> files;
    if (cfg.format == "json") {
        meta["data"] = table_json(main);
        for (const auto& [name, table] : extras) meta[name] = table_json(table);
        files.emplace_back(out, meta.dump(2) + "\n");
    } else {
        meta["files"]["data"] = out.filename().string();
        files.emplace_back(out, table_csv(main));
        for (const auto& [name, table] : extras) {
            const fs::path p = extra_path(out, name);
            meta["files"][name] = p.filename().string();
            files.emplace_back(p, table_csv(table));
        }
        files.emplace_back(sidecar_path(out), meta.dump(2) + "\n");
    }
    write_files_atomic(files);
}

void check_output(const RunConfig& cfg) {
    if (cfg.out.empty()) throw UsageError("--out is required");
    if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
    if (cfg.format == "csv" && fs::path(cfg.out).extension() == ".json")
        throw UsageError("CSV output needs a path that does not end in .json (the sidecar takes that name)");
}

Atom resolve_atom(const RunConfig& cfg) {
    const AtomCase kind = cfg.kind();
    if (cfg.atom.empty()) return make_atom(kind, kind == AtomCase::wavelet ? "shannon" : "gaussian");
    if (fs::path(cfg.atom).extension() == ".json") {
        Atom atom = import_atom(cfg.atom);
        if (atom.kind() != kind)
            throw UsageError("atom '" + cfg.atom + "' belongs to the " + std::string(to_string(atom.kind())) + " case");
        return atom;
    }
    return make_atom(kind, cfg.atom);
}

std::size_t grid_size(const RunConfig& cfg, std::size_t fallback, std::size_t cap) {
    const std::size_t n = cfg.n.value_or(fallback);
    if (n < 2) throw UsageError("--n must be at least 2");
    if (n > cap && !cfg.allow_large)
        throw UsageError("--n " + std::to_string(n) + " exceeds the cap of " + std::to_string(cap) +
                         "; pass --allow-large to override");
    return n;
}

LineGrid xi_grid(const RunConfig& cfg, std::size_t fallback, std::size_t cap) {
    const std::size_t n = grid_size(cfg, fallback, cap);
    if (cfg.xi_min.has_value() != cfg.xi_max.has_value())
        throw UsageError("--xi-min and --xi-max must be given together");
    if (!cfg.xi_min) return operator_grid(cfg.kind(), n);
    const double lo = *cfg.xi_min;
    const double hi = *cfg.xi_max;
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw UsageError("need finite --xi-min < --xi-max");
    return {lo, (hi - lo) / static_cast<double>(n - 1), n};
}

Profile parse_symbol_option(const std::string& text, const char* flag) {
    try {
        return parse_profile(text);
    } catch (const SymbolParseError& e) {
        std::ostringstream os;
        os << flag << ": " << e.what() << "\n  " << text << "\n  " << std::string(e.position(), ' ')
           << "^";
        throw UsageError(os.str());
    }
}

json base_meta(const char* command, const RunConfig& cfg, const Atom& atom) {
    return {{"command", command},
            {"case", std::string(to_string(atom.kind()))},
            {"atom", atom.name()},
            {"seed", cfg.seed},
            {"format", cfg.format}};
}

json domain_json(const CalculusOptions& options) {
    const auto [lo, hi] = healthy_band(options.domain);
    return {{"lower", options.domain.lower},
            {"upper", options.domain.upper},
            {"cells", options.domain.cells},
            {"gauss_order", options.order},
            {"healthy_band", {lo, hi}}};
}

int cmd_gamma(const RunConfig& cfg, std::ostream& out) {
    check_output(cfg);
    const Atom atom = resolve_atom(cfg);
    const Profile alpha = parse_symbol_option(cfg.symbol.empty() ? "const:1" : cfg.symbol, "--symbol");
    const LineGrid grid = xi_grid(cfg, 256, kSampleCap);
    const CalculusOptions options = CalculusOptions::defaults(atom.kind());
    const GammaFunction gamma = gamma_function(atom, alpha, grid, options);

    json meta = base_meta("gamma", cfg, atom);
    meta["symbol"] = alpha.describe();
    meta["grid"] = grid_json(grid);
    meta["quadrature"] = domain_json(options);
    meta["overflow"] = gamma.overflow;
    emit(cfg, complex_table("xi", grid, gamma.values), meta);
    out << "gamma: " << grid.count() << " samples written to " << cfg.out << "\n";
    return ExitCode::ok;
}

int cmd_spectrum(const RunConfig& cfg, bool overlay, std::ostream& out) {
    check_output(cfg);
    const Atom atom = resolve_atom(cfg);
    const Profile alpha = parse_symbol_option(cfg.symbol.empty() ? "const:1" : cfg.symbol, "--symbol");
    const LineGrid grid = xi_grid(cfg, 256, overlay ? kOperatorCap : kSampleCap);
    const CalculusOptions options = CalculusOptions::defaults(atom.kind());
    const GammaFunction gamma = gamma_function(atom, alpha, grid, options);
    const SpectrumReport report = spectrum_from_gamma(gamma, alpha.is_real(), alpha.bound());

    json meta = base_meta("spectrum", cfg, atom);
    meta["symbol"] = alpha.describe();
    meta["grid"] = grid_json(grid);
    meta["quadrature"] = domain_json(options);
    meta["real"] = report.real;
    if (report.real) meta["interval"] = {report.min, report.max};
    meta["norm"] = report.norm;
    meta["bounded"] = report.bounded;
    meta["verdict"] = report.verdict;

    std::vector<std::pair<std::string, Table>> extras;
    if (overlay) {
        OperatorOptions op = OperatorOptions::defaults(atom.kind());
        op.allow_large = cfg.allow_large;
        const OperatorMatrix m = build_direct(atom, SymbolSpec::first(alpha), grid, op);
        const SpectrumResult eig = spectrum(m, std::span<const cplx>(gamma.values));
        Table t{{"index", "re", "im"}, {}};
        for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
            t.rows.push_back({static_cast<double>(k), eig.eigenvalues[k].real(), eig.eigenvalues[k].imag()});
        extras.emplace_back("eigen", std::move(t));
        meta["hausdorff"] = eig.hausdorff.value_or(std::numeric_limits<double>::quiet_NaN());
        meta["hermitian"] = eig.hermitian;
        meta["eigensolver_converged"] = eig.converged;
    }
    emit(cfg, complex_table("xi", grid, gamma.values), meta, extras);
    out << "spectrum: " << report.verdict;
    if (report.real) out << ", range [" << format_double(report.min) << ", " << format_double(report.max) << "]";
    if (overlay) out << ", hausdorff " << format_double(meta["hausdorff"].get<double>());
    out << "\n";
    return ExitCode::ok;
}

int cmd_kernel(const RunConfig& cfg, const std::string& kind_text, std::ostream& out) {
    check_output(cfg);
    if (kind_text != "overlap" && kind_text != "compound") throw UsageError("--kind must be overlap or compound");
    const Atom atom = resolve_atom(cfg);
    const LineGrid grid = xi_grid(cfg, 128, kOperatorCap);
    const CalculusOptions options = CalculusOptions::defaults(atom.kind());
    std::optional<Profile> alpha;
    if (kind_text == "compound") alpha = parse_symbol_option(cfg.symbol.empty() ? "const:1" : cfg.symbol, "--symbol");
    const KernelMatrix k =
        alpha ? compound_kernel(atom, *alpha, grid, options) : overlap_kernel(atom, grid, options);

    Table t{{"xi", "omega", "re", "im"}, {}};
    const auto n = static_cast<Eigen::Index>(grid.count());
    t.rows.reserve(grid.count() * grid.count());
    double diagonal_defect = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const cplx v = k.values(i, j);
            t.rows.push_back({grid.at(static_cast<std::size_t>(i)), grid.at(static_cast<std::size_t>(j)), v.real(),
                              v.imag()});
        }
        if (!alpha && in_healthy_band(options.domain, grid.at(static_cast<std::size_t>(i))))
            diagonal_defect = std::max(diagonal_defect, std::abs(k.values(i, i) - 1.0));
    }
    json meta = base_meta("kernel", cfg, atom);
    meta["kind"] = kind_text;
    meta["symbol"] = k.symbol;
    meta["grid"] = grid_json(grid);
    meta["quadrature"] = domain_json(options);
    meta["hermitian_defect"] = hermitian_defect(k.values);
    if (!alpha) meta["diagonal_defect_healthy_band"] = diagonal_defect;
    emit(cfg, t, meta);
    out << "kernel: " << grid.count() << " x " << grid.count() << " written to " << cfg.out << "\n";
    return ExitCode::ok;
}

int cmd_verify(RunConfig cfg, const std::string& which, std::optional<double> tolerance, std::ostream& out) {
    if (cfg.out.empty()) cfg.out = which + "-report.json";
    if (tolerance && !(*tolerance >= 0.0)) throw UsageError("--tolerance must be nonnegative");
    if (tolerance && which == "algebra") throw UsageError("--tolerance applies to cto1, cto2, cto3 and transforms");
    const AtomCase kind = cfg.kind();
    const Atom atom = resolve_atom(cfg);
    json report{{"command", "verify"},
                {"suite", which},
                {"case", std::string(to_string(kind))},
                {"atom", atom.name()},
                {"seed", cfg.seed}};
    bool pass = false;
    if (which == "transforms") {
        const std::size_t n = grid_size(cfg, 1024, kSampleCap);
        const TransformCheck c = verify_transforms(atom, n, cfg.seed, 20, tolerance.value_or(2e-3));
        report["n"] = n;
        report["signals"] = c.signals;
        report["factorization_max"] = c.factorization_max;
        report["isometry_max"] = c.isometry_max;
        report["tolerance"] = c.tolerance;
        pass = c.pass;
    } else if (which == "algebra") {
        const std::size_t n = grid_size(cfg, 128, kOperatorCap);
        const AlgebraCheck c = verify_algebra(atom, n, cfg.seed);
        report["n"] = n;
        report["commutator_max"] = c.commutator_max;
        if (c.semi_commutator_sup) report["semi_commutator_sup"] = *c.semi_commutator_sup;
        report["simplex_defect"] = c.simplex_defect;
        report["tau_isometry_max"] = c.tau_isometry_max;
        pass = c.pass;
    } else {
        const EquivalenceCase which_case = parse_equivalence_case(which);
        EquivalenceSpec spec;
        spec.which = which_case;
        spec.kind = kind;
        spec.atom = atom.name();
        spec.n = grid_size(cfg, which_case == EquivalenceCase::cto1 ? 256 : 128, kOperatorCap);
        spec.seed = cfg.seed;
        spec.allow_large = cfg.allow_large;
        spec.requested_tolerance = tolerance;
        const char* default_alpha = kind == AtomCase::gabor ? "indicator:-1,1" : "indicator:1,2";
        spec.alpha = parse_symbol_option(cfg.symbol.empty() ? default_alpha : cfg.symbol, "--symbol");
        spec.beta = parse_symbol_option(cfg.beta.empty() ? "gaussian:0,4" : cfg.beta, "--beta");
        if (atom.shape() == AtomShape::sampled) throw UsageError("verify needs a catalog atom");
        const VerificationReport r = verify_equivalence(spec);
        report["n"] = r.n;
        report["symbol"] = r.symbol;
        report["norm_discrepancy"] = r.norm_discrepancy;
        report["hausdorff"] = r.hausdorff;
        report["action_error_max"] = r.action_error_max;
        report["tolerance"] = r.tolerance;
        if (!r.message.empty()) report["message"] = r.message;
        pass = r.pass;
    }
    report["pass"] = pass;
    write_file_atomic(cfg.out, report.dump(2) + "\n");
    out << "verify " << which << ": " << (pass ? "PASS" : "FAIL") << " (report " << cfg.out << ")\n";
    return pass ? ExitCode::ok : ExitCode::verification_failed;
}

int cmd_filter(const RunConfig& cfg, const std::string& input, const std::string& mode, bool compare,
               std::ostream& out) {
    check_output(cfg);
    if (mode != "slow" && mode != "fast") throw UsageError("--mode must be slow or fast");
    if (input.empty()) throw UsageError("--input is required");
    const Atom atom = resolve_atom(cfg);
    const SampledFunction f = read_signal_csv(input);
    if (f.grid.count() > kSampleCap && !cfg.allow_large)
        throw UsageError("input has more than " + std::to_string(kSampleCap) + " samples; pass --allow-large");

    std::optional<SymbolSpec> symbol;
    if (!cfg.symbol.empty() && !cfg.beta.empty())
        symbol = SymbolSpec::separable(parse_symbol_option(cfg.symbol, "--symbol"),
                                       parse_symbol_option(cfg.beta, "--beta"));
    else if (!cfg.beta.empty())
        symbol = SymbolSpec::second(parse_symbol_option(cfg.beta, "--beta"));
    else
        symbol = SymbolSpec::first(parse_symbol_option(cfg.symbol.empty() ? "const:1" : cfg.symbol, "--symbol"));

    json meta = base_meta("filter", cfg, atom);
    meta["input"] = fs::path(input).filename().string();
    meta["symbol"] = symbol->descriptor;
    meta["symbol_kind"] = std::string(to_string(symbol->kind));
    meta["mode"] = compare ? "compare" : mode;
    meta["input_norm"] = f.norm();

    if (compare) {
        const FilterResult r = apply_tlo_to_signal(atom, *symbol, f, true);
        meta["output_norm"] = r.slow.norm();
        meta["fast_norm"] = r.fast->norm();
        meta["deviation"] = r.deviation;
        emit(cfg, signal_table(r.slow), meta, {{"fast", signal_table(*r.fast)}});
        out << "filter: deviation between paths " << format_double(r.deviation) << "\n";
        return ExitCode::ok;
    }
    const SampledFunction g = mode == "fast" ? apply_tlo_fast(atom, *symbol, f) : apply_tlo_slow(atom, *symbol, f);
    meta["output_norm"] = g.norm();
    emit(cfg, signal_table(g), meta);
    out << "filter: output norm " << format_double(g.norm()) << " (input " << format_double(f.norm()) << ")\n";
    return ExitCode::ok;
}

std::vector<double> parse_cuts(const std::string& text) {
    std::vector<double> cuts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string token = text.substr(pos, comma - pos);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || ec != std::errc{} || end != token.data() + token.size() || !std::isfinite(v))
            throw UsageError("--cuts: expected a comma-separated list of numbers at offset " + std::to_string(pos));
        cuts.push_back(v);
        pos = comma + 1;
    }
    return cuts;
}

int cmd_algebra(const RunConfig& cfg, const std::string& cuts_text, bool refine, std::ostream& out) {
    check_output(cfg);
    const Atom atom = resolve_atom(cfg);
    const AtomCase kind = atom.kind();
    const std::vector<double> cuts = parse_cuts(cuts_text.empty() ? (kind == AtomCase::gabor ? "0" : "1") : cuts_text);
    Partition partition = [&] {
        try {
            return Partition::split(FiberDomain::defaults(kind), cuts);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--cuts: ") + e.what());
        }
    }();
    const LineGrid grid = xi_grid(cfg, 256, kSampleCap);
    const NablaCloud cloud = gamma_vector(atom, partition, grid);

    Table t{{"xi"}, {}};
    for (std::size_t k = 0; k < cloud.m; ++k) t.header.push_back("z" + std::to_string(k + 1));
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        std::vector<double> row{grid.at(i)};
        row.insert(row.end(), cloud.points[i].begin(), cloud.points[i].end());
        t.rows.push_back(std::move(row));
    }
    json meta = base_meta("algebra", cfg, atom);
    meta["partition"] = partition.describe();
    meta["pieces"] = partition.size();
    meta["grid"] = grid_json(grid);
    meta["simplex_defect"] = cloud.simplex_defect();
    if (refine) {
        json steps = json::array();
        for (const RefinementStep& s : refine_cloud(atom, partition, 8.0, grid.count(), 1e-3, 32768))
            steps.push_back({{"n", s.n}, {"distance", s.distance}});
        meta["refinement"] = steps;
    }
    emit(cfg, t, meta);
    out << "algebra: " << cloud.points.size() << " points in " << cloud.m << " coordinates written to " << cfg.out
        << "\n";
    return ExitCode::ok;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--case", cfg.kind_text, "wavelet or gabor")->check(CLI::IsMember({"wavelet", "gabor"}));
    sub->add_option("--atom", cfg.atom, "shannon, haar, gaussian, rect, or an atom .json sidecar");
    sub->add_option("--symbol", cfg.symbol, "first-variable profile, e.g. indicator:-1,1");
    sub->add_option("--n", cfg.n, "number of xi samples (or signal samples for verify transforms)");
    sub->add_option("--xi-min", cfg.xi_min, "first xi sample");
    sub->add_option("--xi-max", cfg.xi_max, "last xi sample");
    sub->add_option("--seed", cfg.seed, "seed for random test vectors");
    sub->add_option("--out", cfg.out, "output path");
    sub->add_option("--format", cfg.format, "csv (with a .json sidecar) or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--allow-large", cfg.allow_large, "lift the size caps");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Toeplitz localization operators: symbols, kernels, spectra and verification"};
    app.name("tlo");
    app.require_subcommand(1);

    RunConfig cfg;
    CLI::App* gamma = app.add_subcommand("gamma", "sample the scalar symbol gamma of a first-variable symbol");
    add_common(gamma, cfg);

    bool overlay = false;
    CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "spectrum and norm read off gamma");
    add_common(spectrum_cmd, cfg);
    spectrum_cmd->add_flag("--overlay", overlay, "also diagonalize the direct matrix and compare");

    std::string kernel_kind = "overlap";
    CLI::App* kernel = app.add_subcommand("kernel", "two-point kernel matrices");
    add_common(kernel, cfg);
    kernel->add_option("--kind", kernel_kind, "overlap or compound (uses --symbol)");

    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite; exit 0 iff it passes");
    add_common(verify, cfg);
    verify->add_option("suite", suite, "cto1, cto2, cto3, transforms or algebra")
        ->required()
        ->check(CLI::IsMember({"cto1", "cto2", "cto3", "transforms", "algebra"}));
    verify->add_option("--beta", cfg.beta, "second-variable profile");
    std::optional<double> tolerance;
    verify->add_option("--tolerance", tolerance, "override the suite tolerance");

    std::string input;
    std::string mode = "slow";
    bool compare = false;
    CLI::App* filter = app.add_subcommand("filter", "apply the operator to a signal CSV (x,re,im)");
    add_common(filter, cfg);
    filter->add_option("--input", input, "input signal CSV")->required();
    filter->add_option("--beta", cfg.beta, "second-variable profile");
    filter->add_option("--mode", mode, "slow (field pipeline) or fast (diagonalized)");
    filter->add_flag("--compare", compare, "run both paths and report their deviation");

    std::string cuts;
    bool refine = false;
    CLI::App* algebra = app.add_subcommand("algebra", "indicator gamma-vectors of a partition");
    add_common(algebra, cfg);
    algebra->add_option("--cuts", cuts, "comma-separated cut points of G1");
    algebra->add_flag("--refine", refine, "double the xi density until the cloud settles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::ok : ExitCode::error;
    }

    try {
        if (*gamma) return cmd_gamma(cfg, out);
        if (*spectrum_cmd) return cmd_spectrum(cfg, overlay, out);
        if (*kernel) return cmd_kernel(cfg, kernel_kind, out);
        if (*verify) return cmd_verify(cfg, suite, tolerance, out);
        if (*filter) return cmd_filter(cfg, input, mode, compare, out);
        if (*algebra) return cmd_algebra(cfg, cuts, refine, out);
    } catch (const std::exception& e) {
        err << "tlo: " << e.what() << "\n";
        return ExitCode::error;
    }
    return ExitCode::error;
}

}  // namespace tlo::cli
