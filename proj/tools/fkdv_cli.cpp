#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fkdv/config.hpp"
#include "fkdv/errors.hpp"
#include "fkdv/experiments.hpp"
#include "fkdv/initial_condition.hpp"
#include "fkdv/io.hpp"
#include "fkdv/probes.hpp"
#include "fkdv/solver.hpp"
#include "fkdv/stein.hpp"

namespace fs = std::filesystem;
using namespace fkdv;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitMetricFail = 2;

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Common {
  std::string config_path;
  std::vector<std::string> settings;
  std::string out;
  long long seed = -1;
};

RunConfig load(const Common& c) {
  RunConfig rc = c.config_path.empty() ? empty_run_config() : parse_config_file(c.config_path);
  for (const auto& s : c.settings) apply_setting(rc, s);
  if (c.seed >= 0) {
    rc.seed = std::uint64_t(c.seed);
    if (rc.sim.ic.family == IcFamily::random_band) rc.sim.ic.seed = rc.seed;
  }
  finalize(rc);
  return rc;
}

std::string out_dir(const Common& c, const std::string& leaf) {
  if (!c.out.empty()) return c.out;
  const char* root = std::getenv("FKDV_OUT");
  return (fs::path(root && *root ? root : "runs") / leaf).string();
}

std::string join(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

void write_report(const std::string& dir, const ExperimentReport& rep) {
  std::vector<CsvRow> rows;
  for (const auto& m : rep.metrics)
    rows.push_back({m.name, format_double(m.measured), format_double(m.expected), format_double(m.tolerance),
                    to_string(m.rule), m.pass ? "true" : "false"});
  write_csv(join(dir, "report.csv"), {"metric", "measured", "expected", "tolerance", "rule", "pass"}, rows);
  std::string notes;
  for (const auto& n : rep.notes) notes += n + "\n";
  write_text(join(dir, "notes.txt"), notes);
}

void print_report(const ExperimentReport& rep) {
  for (const auto& m : rep.metrics)
    std::cout << (m.pass ? "PASS " : "FAIL ") << m.name << " measured=" << format_double(m.measured)
              << " expected=" << format_double(m.expected) << " tol=" << format_double(m.tolerance) << " ("
              << to_string(m.rule) << ")\n";
  for (const auto& n : rep.notes) std::cout << "  # " << n << "\n";
  std::cout << rep.name << ": " << (rep.passed() ? "PASS" : "FAIL") << "\n";
}

int cmd_simulate(const Common& c) {
  RunConfig rc = load(c);
  const std::string dir = out_dir(c, "simulate");
  prepare_out_dir(dir);
  ManifestInfo info{"simulate", now_utc(), "", false};
  const Trajectory tr = solve(rc.sim);
  fs::create_directories(fs::path(dir) / "fields");
  write_diagnostics(join(dir, "diagnostics.csv"), tr.diagnostics, rc.sim.weight_orders);
  write_field(join(fs::path(dir) / "fields", "u_final.csv"), tr.final_state);
  for (std::size_t i = 0; i < tr.states.size(); ++i)
    write_field(join(fs::path(dir) / "fields", "u_" + std::to_string(i) + ".csv"), tr.states[i]);
  info.end_time = now_utc();
  info.truncated = tr.truncated;
  write_text(join(dir, "manifest.txt"), render_manifest(rc, info));
  if (!tr.notes.empty()) std::cout << tr.notes << "\n";
  std::cout << "simulate: " << tr.steps << " steps, " << tr.diagnostics.size() << " rows"
            << (tr.truncated ? ", truncated at t=" + format_double(tr.truncation_time) : "") << " -> " << dir << "\n";
  return kExitPass;
}

int cmd_experiment(const Common& c, std::string name) {
  RunConfig rc = load(c);
  if (name.empty()) name = rc.experiment;
  if (name.empty()) throw ConfigError("experiment: no name given on the command line or in [experiment] name");
  rc.experiment = name;
  const std::string dir = out_dir(c, name);
  prepare_out_dir(dir);
  ManifestInfo info{"experiment " + name, now_utc(), "", false};
  const ExperimentReport rep = run_named(name, rc.sim, rc.params);
  info.end_time = now_utc();
  for (const auto& n : rep.notes)
    if (n.find("truncat") != std::string::npos) info.truncated = true;
  write_report(dir, rep);
  write_text(join(dir, "manifest.txt"), render_manifest(rc, info));
  print_report(rep);
  return rep.passed() ? kExitPass : kExitMetricFail;
}

struct SteinArgs {
  std::string target = "power_cutoff";
  double b = 0.5, beta = 0.2, alpha = 0.5, t = 1.0, theta = 0.5, n_w = 10.0;
  bool bracket = false;
  double cutoff = 0.0;
  std::vector<double> eta = {1e-3, 1e-2, 1e-1};
  std::string fit;
};

SteinTarget build_target(const SteinArgs& a) {
  SteinTarget t;
  if (a.target == "constant") t = SteinTarget::constant_one();
  else if (a.target == "power_cutoff") t = SteinTarget::power_cutoff(a.beta);
  else if (a.target == "signed_power_cutoff") t = SteinTarget::signed_power_cutoff(a.beta);
  else if (a.target == "propagator") t = SteinTarget::propagator(a.alpha, a.t);
  else if (a.target == "sign_propagator") t = SteinTarget::sign_propagator(a.t);
  else if (a.target == "weight") t = SteinTarget::weight(a.theta, a.n_w);
  else throw ConfigError("stein: unknown target '" + a.target + "'");
  if (a.bracket) t = t.with_bracket();
  if (a.cutoff > 0.0) t = t.with_cutoff(a.cutoff);
  return t;
}

int cmd_stein(const Common& c, const SteinArgs& a) {
  const std::string dir = out_dir(c, "stein");
  prepare_out_dir(dir);
  SteinRequest req;
  req.b = a.b;
  req.target = build_target(a);
  req.eval_points = a.eta;
  const SteinResult res = stein_derivative(req);
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < a.eta.size(); ++i)
    rows.push_back({req.target.name(), format_double(a.b), format_double(a.eta[i]), format_double(res.values[i]),
                    format_double(res.error_estimates[i])});
  write_csv(join(dir, "report.csv"), {"target", "b", "eta", "value", "err_est"}, rows);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  int code = kExitPass;
  if (!a.fit.empty()) {
    if (a.fit != "small" && a.fit != "large") throw ConfigError("stein: --fit must be small or large");
    const SlopeFit f = stein_slope_fit(req, a.fit == "small" ? Regime::small_eta : Regime::large_eta);
    std::cout << "slope fit (" << f.method << "): fitted " << format_double(f.fitted_slope) << ", expected "
              << format_double(f.expected_slope) << ", residual " << format_double(f.residual)
              << (f.log_correction_detected ? ", log correction detected" : "") << "\n";
    code = f.accepted ? kExitPass : kExitMetricFail;
  }
  std::cout << "stein: " << rows.size() << " points -> " << dir << "\n";
  return code;
}

struct ProbeArgs {
  std::string kind = "hilbert_frac";
  ProbeParams p;
  int pairs = 50, n = 1024;
  double length = 64.0;
};

int cmd_probe(const Common& c, const ProbeArgs& a) {
  const ProbeKind kind = parse_probe_kind(a.kind);
  validate_probe(kind, a.p);
  const std::string dir = out_dir(c, "probe");
  prepare_out_dir(dir);
  const unsigned long seed = c.seed >= 0 ? static_cast<unsigned long>(c.seed) : 1ul;
  const std::string params = "beta=" + format_double(a.p.beta) + ";gamma=" + format_double(a.p.gamma) +
                             ";l=" + std::to_string(a.p.l) + ";m=" + std::to_string(a.p.m) +
                             ";p=" + std::to_string(a.p.p) + ";cutoff=" + format_double(a.p.cutoff);
  const auto grid = make_grid(a.n, a.length);
  std::vector<CsvRow> rows;
  for (int i = 0; i < a.pairs; ++i) {
    const Field g = make_initial(grid, InitialCondition::random_band(seed + 2 * i, 0.5, 4.0, 1.0));
    const Field f = make_initial(grid, InitialCondition::random_band(seed + 2 * i + 1, 0.5, 4.0, 1.0));
    rows.push_back({to_string(kind), params, format_double(commutator_probe(kind, g, f, a.p))});
  }
  write_csv(join(dir, "report.csv"), {"kind", "params", "ratio"}, rows);
  const ProbeEnsemble e = probe_ensemble(kind, a.p, a.pairs, a.n, a.length, seed);
  std::cout << "probe " << to_string(kind) << ": max " << format_double(e.max_ratio) << ", doubled "
            << format_double(e.max_ratio_doubled) << (e.finite && e.stable ? " (stable)" : " (UNSTABLE)") << " -> "
            << dir << "\n";
  return e.finite && e.stable ? kExitPass : kExitMetricFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional KdV solver and diagnostics"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-c,--config", common.config_path, "sectioned key=value config file");
  app.add_option("-s,--set", common.settings, "override, e.g. --set sim.alpha=-0.5 (repeatable)");
  app.add_option("-o,--out", common.out, "output directory (default $FKDV_OUT/<command>, FKDV_OUT=runs)");
  app.add_option("--seed", common.seed, "seed for random_band data and probe ensembles")->check(CLI::NonNegativeNumber);

  auto* sim = app.add_subcommand("simulate", "run the solver and write diagnostics and fields");

  auto* exp = app.add_subcommand("experiment", "run a named experiment");
  std::string exp_name;
  std::string names;
  for (const auto& n : experiment_names()) names += (names.empty() ? "" : ", ") + n;
  exp->add_option("name", exp_name, names);

  auto* conv = app.add_subcommand("convergence", "time-step order, Picard agreement, rerun determinism");

  SteinArgs sa;
  auto* stein = app.add_subcommand("stein", "Stein derivative of a frequency-side target");
  stein->add_option("--target", sa.target,
                    "constant, power_cutoff, signed_power_cutoff, propagator, sign_propagator, weight");
  stein->add_option("--b", sa.b, "order b in (0,1)");
  stein->add_option("--beta", sa.beta);
  stein->add_option("--alpha", sa.alpha);
  stein->add_option("--t", sa.t);
  stein->add_option("--theta", sa.theta);
  stein->add_option("--nw", sa.n_w, "truncation N of the weight target");
  stein->add_flag("--bracket", sa.bracket, "multiply by <xi>^theta");
  stein->add_option("--cutoff", sa.cutoff, "multiply by phi_a");
  stein->add_option("--eta", sa.eta, "evaluation points")->delimiter(',');
  stein->add_option("--fit", sa.fit, "slope fit regime: small or large");

  ProbeArgs pa;
  auto* probe = app.add_subcommand("probe", "commutator probe ensemble on seeded random data");
  probe->add_option("--kind", pa.kind, "hilbert_frac, frac_com, triple, projector, hilbert_local");
  probe->add_option("--beta", pa.p.beta);
  probe->add_option("--gamma", pa.p.gamma);
  probe->add_option("--l", pa.p.l);
  probe->add_option("--m", pa.p.m);
  probe->add_option("--p", pa.p.p);
  probe->add_option("--cutoff", pa.p.cutoff);
  probe->add_option("--pairs", pa.pairs);
  probe->add_option("--n", pa.n);
  probe->add_option("--length", pa.length);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitError;
  }

  try {
    if (*sim) return cmd_simulate(common);
    if (*exp) return cmd_experiment(common, exp_name);
    if (*conv) return cmd_experiment(common, "convergence");
    if (*stein) return cmd_stein(common, sa);
    if (*probe) return cmd_probe(common, pa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
