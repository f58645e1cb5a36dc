#include "fkdv/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fkdv/errors.hpp"

namespace fkdv {

namespace fs = std::filesystem;

namespace {

std::string join(const CsvRow& row) {
  std::string s;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) s += ',';
    s += row[i];
  }
  return s;
}

std::string num(double v) { return std::isnan(v) ? std::string("nan") : format_double(v); }

}  // namespace

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::string s = join(header) + "\n";
  for (const auto& r : rows) s += join(r) + "\n";
  write_text(path, s);
}

void prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path probe = fs::path(dir) / ".fkdv_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + dir + " is not writable");
  }
  fs::remove(probe, ec);
}

void write_field(const std::string& path, const Field& f) {
  std::vector<CsvRow> rows;
  rows.reserve(f.samples.size());
  for (int j = 0; j < f.size(); ++j) rows.push_back({format_double(f.grid->node(j)), format_double(f[j])});
  write_csv(path, {"x", "u"}, rows);
}

Field read_field(const std::string& path, const GridPtr& grid) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != "x,u") throw IoError(path + ": expected header 'x,u'");
  Field f(grid);
  int j = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path + ": malformed row " + std::to_string(j + 2));
    if (j >= grid->n()) throw IoError(path + ": more rows than grid points (" + std::to_string(grid->n()) + ")");
    double x = 0.0, u = 0.0;
    try {
      x = std::stod(line.substr(0, comma));
      u = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw IoError(path + ": non-numeric row " + std::to_string(j + 2));
    }
    if (std::abs(x - grid->node(j)) > 1e-12 * grid->length())
      throw IoError(path + ": node " + std::to_string(j) + " does not match the grid");
    f[j++] = u;
  }
  if (j != grid->n())
    throw IoError(path + ": " + std::to_string(j) + " rows for a grid of " + std::to_string(grid->n()));
  return f;
}

std::string weight_column(double r) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "w_%g", r);
  return buf;
}

CsvRow diagnostics_header(const std::vector<double>& weight_orders) {
  CsvRow h{"t", "i1", "i2", "i3", "mean", "moment_x", "max_u", "min_ux", "tail_frac"};
  for (double r : weight_orders) h.push_back(weight_column(r));
  return h;
}

CsvRow diagnostics_row(const DiagnosticsRecord& r) {
  CsvRow row{num(r.t),      num(r.i1),       num(r.i2),     r.i3 ? num(*r.i3) : "nan", num(r.mean),
             num(r.moment_x), num(r.max_u), num(r.min_ux), num(r.tail_frac)};
  for (const auto& w : r.wnorms) row.push_back(num(w.second));
  return row;
}

void write_diagnostics(const std::string& path, const std::vector<DiagnosticsRecord>& records,
                       const std::vector<double>& weight_orders) {
  std::vector<CsvRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(diagnostics_row(r));
  write_csv(path, diagnostics_header(weight_orders), rows);
}

}  // namespace fkdv
