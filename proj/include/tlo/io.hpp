#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tlo/atom.hpp"
#include "tlo/grid.hpp"
#include "tlo/transforms.hpp"

namespace tlo {

/// Shortest decimal that reads back to the same double; locale independent.
std::string format_double(double x);

/// Accumulates CSV text with full-precision numbers.
class CsvBuilder {
public:
    explicit CsvBuilder(std::initializer_list<std::string_view> header);
    explicit CsvBuilder(const std::vector<std::string>& header);

    CsvBuilder& row(std::initializer_list<double> values);
    CsvBuilder& row(const std::vector<double>& values);
    const std::string& str() const noexcept { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

/// Writes every file to a temporary sibling first and renames them into place
/// only after all writes succeeded, so a failure leaves no partial output.
void write_files_atomic(const std::vector<std::pair<std::filesystem::path, std::string>>& files);
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

/// Signal CSV: header `x,re,im`, uniformly spaced x.
std::string signal_csv(const SampledFunction& f);
SampledFunction parse_signal_csv(std::string_view text, const std::string& source = "<input>");
SampledFunction read_signal_csv(const std::filesystem::path& path);

nlohmann::json grid_json(const LineGrid& grid);
LineGrid grid_from_json(const nlohmann::json& j);

/// Atom export: `<stem>.csv` (time samples), `<stem>.freq.csv` (frequency
/// samples) and `<stem>.json` (case, name, normalization, grids).
void export_atom(const Atom& atom, const std::filesystem::path& stem);
/// Reads an atom from its JSON sidecar. Catalog atoms are rebuilt from their
/// closed forms and checked against the stored samples.
Atom import_atom(const std::filesystem::path& sidecar);

/// Field export: CSV (z, omega, re, im) plus its JSON sidecar text.
std::pair<std::string, std::string> field_files(const PhasePlaneField& field, const std::string& atom_name);

}  // namespace tlo
