#include "tlo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace tlo {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

CsvBuilder::CsvBuilder(std::initializer_list<std::string_view> header) : columns_(header.size()) {
    bool first = true;
    for (std::string_view h : header) {
        if (!first) text_ += ',';
        text_ += h;
        first = false;
    }
    text_ += '\n';
}

CsvBuilder::CsvBuilder(const std::vector<std::string>& header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

CsvBuilder& CsvBuilder::row(std::initializer_list<double> values) {
    return row(std::vector<double>(values));
}

CsvBuilder& CsvBuilder::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::invalid_argument("CsvBuilder: wrong number of columns");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text_ += ',';
        text_ += format_double(values[i]);
    }
    text_ += '\n';
    return *this;
}

void write_files_atomic(const std::vector<std::pair<fs::path, std::string>>& files) {
    std::vector<fs::path> temps;
    auto cleanup = [&temps] {
        std::error_code ec;
        for (const auto& t : temps) fs::remove(t, ec);
    };
    for (const auto& [path, content] : files) {
        fs::path temp = path;
        temp += ".tmp-" + std::to_string(::getpid());
        temps.push_back(temp);
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) {
            cleanup();
            throw std::runtime_error("cannot write '" + path.string() + "'");
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        fs::rename(temps[i], files[i].first, ec);
        if (ec) {
            cleanup();
            throw std::runtime_error("cannot move output into place at '" + files[i].first.string() +
                                     "': " + ec.message());
        }
    }
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    write_files_atomic({{path, std::string(content)}});
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string signal_csv(const SampledFunction& f) {
    CsvBuilder csv{"x", "re", "im"};
    for (std::size_t j = 0; j < f.values.size(); ++j)
        csv.row({f.grid.at(j), f.values[j].real(), f.values[j].imag()});
    return csv.str();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_field(std::string_view token, const std::string& where) {
    token = trim(token);
    double value = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw std::runtime_error(where + ": expected a finite number, got '" + std::string(token) + "'");
    return value;
}

}  // namespace

SampledFunction parse_signal_csv(std::string_view text, const std::string& source) {
    std::vector<double> xs;
    std::vector<cplx> values;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        if (!header_seen) {
            if (line != "x,re,im") throw std::runtime_error(where + ": expected header 'x,re,im'");
            header_seen = true;
            continue;
        }
        std::vector<std::string_view> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (cells.size() != 3) throw std::runtime_error(where + ": expected 3 columns");
        xs.push_back(parse_field(cells[0], where));
        values.emplace_back(parse_field(cells[1], where), parse_field(cells[2], where));
    }
    if (!header_seen) throw std::runtime_error(source + ": empty signal file");
    if (xs.size() < 2) throw std::runtime_error(source + ": need at least two samples");
    const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    if (!(step > 0.0)) throw std::runtime_error(source + ": x must be increasing");
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double expected = xs.front() + static_cast<double>(j) * step;
        if (std::abs(xs[j] - expected) > 1e-9 * step * std::max(1.0, static_cast<double>(xs.size())))
            throw std::runtime_error(source + ":" + std::to_string(j + 2) + ": x is not uniformly spaced");
    }
    return {LineGrid(xs.front(), step, xs.size()), std::move(values)};
}

SampledFunction read_signal_csv(const fs::path& path) {
    return parse_signal_csv(read_text_file(path), path.string());
}

json grid_json(const LineGrid& grid) {
    return {{"start", grid.start()}, {"step", grid.step()}, {"count", grid.count()}};
}

LineGrid grid_from_json(const json& j) {
    return {j.at("start").get<double>(), j.at("step").get<double>(), j.at("count").get<std::size_t>()};
}

namespace {

std::string shape_name(AtomShape s) {
    switch (s) {
        case AtomShape::shannon: return "shannon";
        case AtomShape::haar: return "haar";
        case AtomShape::gaussian: return "gaussian";
        case AtomShape::rect: return "rect";
        case AtomShape::sampled: return "sampled";
    }
    return "sampled";
}

double max_difference(const SampledFunction& a, const SampledFunction& b) {
    if (a.values.size() != b.values.size()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
    return m;
}

}  // namespace

void export_atom(const Atom& atom, const fs::path& stem) {
    fs::path time_path = stem;
    time_path += ".csv";
    fs::path freq_path = stem;
    freq_path += ".freq.csv";
    fs::path meta_path = stem;
    meta_path += ".json";
    const json meta = {{"case", std::string(to_string(atom.kind()))},
                       {"name", atom.name()},
                       {"shape", shape_name(atom.shape())},
                       {"normalization", atom.normalization()},
                       {"time_grid", grid_json(atom.time_samples().grid)},
                       {"freq_grid", grid_json(atom.freq_samples().grid)},
                       {"time_csv", time_path.filename().string()},
                       {"freq_csv", freq_path.filename().string()}};
    write_files_atomic({{time_path, signal_csv(atom.time_samples())},
                        {freq_path, signal_csv(atom.freq_samples())},
                        {meta_path, meta.dump(2) + "\n"}});
}

Atom import_atom(const fs::path& sidecar) {
    json meta;
    try {
        meta = json::parse(read_text_file(sidecar));
    } catch (const json::exception& e) {
        throw std::runtime_error(sidecar.string() + ": invalid JSON: " + e.what());
    }
    const AtomCase kind = parse_atom_case(meta.at("case").get<std::string>());
    const std::string name = meta.at("name").get<std::string>();
    const std::string shape = meta.value("shape", std::string("sampled"));
    const fs::path dir = sidecar.parent_path();
    const SampledFunction time = read_signal_csv(dir / meta.at("time_csv").get<std::string>());

    if (shape != "sampled") {
        const LineGrid grid = grid_from_json(meta.at("time_grid"));
        Atom atom = kind == AtomCase::wavelet ? make_wavelet(parse_wavelet_name(shape), grid)
                                              : make_window(parse_window_name(shape), grid);
        if (max_difference(atom.time_samples(), time) > 1e-12)
            throw std::runtime_error(sidecar.string() + ": stored samples do not match the '" + shape +
                                     "' closed form");
        return atom;
    }
    return Atom::from_samples(kind, name, time, meta.at("normalization").get<double>());
}

std::pair<std::string, std::string> field_files(const PhasePlaneField& field, const std::string& atom_name) {
    const bool fiber = field.domain == FieldDomain::fiber;
    const char* second = field.kind == AtomCase::wavelet ? (fiber ? "omega" : "v") : (fiber ? "x" : "p");
    CsvBuilder csv{"z", second, "re", "im"};
    for (Eigen::Index k = 0; k < field.values.rows(); ++k)
        for (Eigen::Index j = 0; j < field.values.cols(); ++j)
            csv.row({field.g1.nodes[k], field.g2.at(j), field.values(k, j).real(), field.values(k, j).imag()});
    const json meta = {{"case", std::string(to_string(field.kind))},
                       {"atom", atom_name},
                       {"domain", fiber ? "fiber" : "analysis"},
                       {"g1", {{"lower", field.g1.lower}, {"upper", field.g1.upper}, {"nodes", field.g1.size()}}},
                       {"g2", grid_json(field.g2)},
                       {"columns", {"z", second, "re", "im"}}};
    return {csv.str(), meta.dump(2) + "\n"};
}

}  // namespace tlo
