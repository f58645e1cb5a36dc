#include "fkdv/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fkdv/errors.hpp"
#include "fkdv/io.hpp"

namespace fkdv {

namespace {

const std::set<std::string> kRequired = {"sim.alpha", "sim.n", "sim.length", "sim.dt", "sim.t_final", "sim.ic"};

const std::map<std::string, std::vector<std::string>> kKeys = {
    {"sim",
     {"alpha", "n", "length", "dt", "t_final", "ic", "dealias", "diag_every", "zero_mean", "tail_tol",
      "weight_orders", "extended", "nonlinear", "hilbert_wnorm"}},
    {"experiment", {"name", "t1", "t2", "r_probe", "l_list", "lambda"}},
    {"run", {"seed"}},
    {"manifest", {"schema_version", "tool_version", "command"}},
    {"grid", {"dx", "k1", "k_nyquist"}},
    {"status", {"start", "end", "truncated"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a real number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// the set of keys assigned so far, kept alongside the config being built
struct Builder {
  RunConfig rc;
  std::set<std::string> seen;
  bool zero_mean = false;
};

void assign(Builder& b, const std::string& section, const std::string& key, const std::string& value) {
  const auto sec = kKeys.find(section);
  if (sec == kKeys.end()) throw ConfigError("unknown section [" + section + "]");
  if (std::find(sec->second.begin(), sec->second.end(), key) == sec->second.end())
    throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  const std::string full = section + "." + key;
  b.seen.insert(full);
  auto& s = b.rc.sim;
  auto& p = b.rc.params;
  if (section == "sim") {
    if (key == "alpha") s.alpha = to_real(full, value);
    else if (key == "n") s.n = int(to_int(full, value));
    else if (key == "length") s.length = to_real(full, value);
    else if (key == "dt") s.dt = to_real(full, value);
    else if (key == "t_final") s.t_final = to_real(full, value);
    else if (key == "ic") {
      const bool zm = s.ic.zero_mean_projected;
      s.ic = parse_initial_condition(value);
      s.ic.zero_mean_projected = zm;
    } else if (key == "dealias") s.dealias = to_bool(full, value);
    else if (key == "diag_every") s.diag_every = int(to_int(full, value));
    else if (key == "zero_mean") s.ic.zero_mean_projected = to_bool(full, value);
    else if (key == "tail_tol") s.tail_tol = to_real(full, value);
    else if (key == "weight_orders") s.weight_orders = to_list(full, value);
    else if (key == "extended") s.extended = to_bool(full, value);
    else if (key == "nonlinear") s.nonlinear = to_bool(full, value);
    else if (key == "hilbert_wnorm") s.hilbert_wnorm = to_bool(full, value);
  } else if (section == "experiment") {
    if (key == "name") b.rc.experiment = value;
    else if (key == "t1") p.t1 = to_real(full, value);
    else if (key == "t2") p.t2 = to_real(full, value);
    else if (key == "r_probe") p.r_probe = to_list(full, value);
    else if (key == "l_list") p.l_list = to_list(full, value);
    else if (key == "lambda") p.lambda = to_real(full, value);
  } else if (section == "run") {
    const long long seed = to_int(full, value);
    if (seed < 0) throw ConfigError(full + ": must be non-negative");
    b.rc.seed = std::uint64_t(seed);
  } else if (section == "manifest" && key == "schema_version") {
    if (to_int(full, value) != kSchemaVersion)
      throw ConfigError(full + ": manifest schema " + value + " is not " + std::to_string(kSchemaVersion));
  }
  // [grid] and [status] entries are informational
}

}  // namespace

RunConfig empty_run_config() { return RunConfig{}; }

RunConfig parse_config(const std::string& text, const std::string& source) {
  Builder b;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (!kKeys.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key=value, got '" + line + "'");
    if (section.empty()) throw ConfigError(where + "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    if (b.seen.count(section + "." + key)) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      assign(b, section, key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  for (const auto& k : kRequired)
    if (!b.seen.count(k)) throw ConfigError(source + ": missing required key '" + k + "'");
  validate(b.rc.sim);
  return b.rc;
}

RunConfig parse_config_file(const std::string& path) { return parse_config(read_text(path), path); }

void apply_setting(RunConfig& rc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  std::string section;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  } else {
    for (const char* s : {"sim", "experiment", "run"}) {
      const auto& keys = kKeys.at(s);
      if (std::find(keys.begin(), keys.end(), key) != keys.end()) {
        section = s;
        break;
      }
    }
    if (section.empty()) throw ConfigError("unknown key '" + key + "'");
  }
  Builder b{rc, {}, false};
  assign(b, section, key, value);
  rc = b.rc;
}

void finalize(RunConfig& rc) { validate(rc.sim); }

std::string render_manifest(const RunConfig& rc, const ManifestInfo& info) {
  const auto& s = rc.sim;
  const auto& p = rc.params;
  auto f = format_double;
  std::ostringstream o;
  o << "[manifest]\n"
    << "schema_version=" << kSchemaVersion << "\n"
    << "tool_version=" << kToolVersion << "\n"
    << "command=" << info.command << "\n"
    << "\n[sim]\n"
    << "alpha=" << f(s.alpha) << "\n"
    << "n=" << s.n << "\n"
    << "length=" << f(s.length) << "\n"
    << "dt=" << f(s.dt) << "\n"
    << "t_final=" << f(s.t_final) << "\n"
    << "ic=" << to_string(s.ic) << "\n"
    << "zero_mean=" << bool_text(s.ic.zero_mean_projected) << "\n"
    << "dealias=" << bool_text(s.dealias) << "\n"
    << "diag_every=" << s.diag_every << "\n"
    << "tail_tol=" << f(s.tail_tol) << "\n"
    << "weight_orders=" << list_text(s.weight_orders) << "\n"
    << "extended=" << bool_text(s.extended) << "\n"
    << "nonlinear=" << bool_text(s.nonlinear) << "\n"
    << "hilbert_wnorm=" << bool_text(s.hilbert_wnorm) << "\n"
    << "\n[experiment]\n"
    << "name=" << rc.experiment << "\n"
    << "t1=" << f(p.t1) << "\n"
    << "t2=" << f(p.t2) << "\n"
    << "r_probe=" << list_text(p.r_probe) << "\n"
    << "l_list=" << list_text(p.l_list) << "\n"
    << "lambda=" << f(p.lambda) << "\n"
    << "\n[run]\n"
    << "seed=" << rc.seed << "\n"
    << "\n[grid]\n"
    << "dx=" << f(s.length / s.n) << "\n"
    << "k1=" << f(2.0 * 3.14159265358979323846 / s.length) << "\n"
    << "k_nyquist=" << f(3.14159265358979323846 * s.n / s.length) << "\n"
    << "\n[status]\n"
    << "start=" << info.start_time << "\n"
    << "end=" << info.end_time << "\n"
    << "truncated=" << bool_text(info.truncated) << "\n";
  return o.str();
}

}  // namespace fkdv
