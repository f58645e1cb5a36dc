#pragma once

#include <string>
#include <vector>

#include "fkdv/diagnostics.hpp"
#include "fkdv/grid.hpp"

namespace fkdv {

using CsvRow = std::vector<std::string>;

/// Comma-separated, header row first, '\n' line ends. IoError names the path.
void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows);
void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

/// Creates the directory if needed and proves it writable before any compute.
void prepare_out_dir(const std::string& dir);

/// Two columns x,u at 17 significant digits.
void write_field(const std::string& path, const Field& f);
/// Reads a field written by write_field; the nodes must match `grid`.
Field read_field(const std::string& path, const GridPtr& grid);

/// "%g" label for a weight order: w_1, w_2.5, ...
std::string weight_column(double r);
CsvRow diagnostics_header(const std::vector<double>& weight_orders);
CsvRow diagnostics_row(const DiagnosticsRecord& r);
void write_diagnostics(const std::string& path, const std::vector<DiagnosticsRecord>& records,
                       const std::vector<double>& weight_orders);

}  // namespace fkdv
