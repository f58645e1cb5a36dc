#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fkdv/experiments.hpp"
#include "fkdv/probes.hpp"
#include "fkdv/stein.hpp"

using namespace fkdv;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void take(const ExperimentReport& r) {
    pass = pass && r.passed();
    for (const auto& m : r.metrics)
      if (!m.pass) detail << " " << r.name << "(alpha=" << r.config.alpha << ")." << m.name << "=" << m.measured;
  }
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!ok) detail << " " << what;
  }
};

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, double(i) / (n - 1)));
  return v;
}

SimConfig odd_gaussian(double a, double alpha, double t_final) {
  SimConfig c;
  c.alpha = alpha;
  c.t_final = t_final;
  c.ic = InitialCondition::odd_gaussian(a, 1.0);
  return c;
}

void conservation(Outcome& o) {
  for (double a : {-1.0, -0.5, 0.5}) {
    SimConfig c;
    c.alpha = a;
    c.ic = InitialCondition::gaussian(0.2, 1.0, 0.0);
    c.ic.zero_mean_projected = true;
    o.take(run_conservation(c));
  }
}

void moment_law(Outcome& o) {
  for (double a : {-0.5, 0.5}) o.take(run_moment_law(odd_gaussian(-4.0, a, 2.0)));
}

void tstar(Outcome& o) {
  const TStarReport r = run_tstar(odd_gaussian(-4.0, 0.5, 3.0));
  o.take(r.report);
  o.check(std::abs(r.t_star_predicted - 2 * std::sqrt(2.0)) < 1e-6, "t*=" + std::to_string(r.t_star_predicted));
}

void burgers_hilbert(Outcome& o) { o.take(run_two_time_bh(odd_gaussian(0.5, -1.0, 2.0), 1.0, 2.0)); }

void decay(Outcome& o) {
  for (double a : {-1.0, -0.5, 0.5}) {
    SimConfig c;
    c.alpha = a;
    c.nonlinear = false;
    c.ic = InitialCondition::gaussian(1.0, 1.0, 0.0);
    o.take(run_decay_threshold(c, {1.5 + a, 1.25 + a}, {200.0, 400.0, 800.0}));
  }
}

void stein(Outcome& o) {
  SteinRequest r;
  r.b = 0.5;
  r.target = SteinTarget::power_cutoff(0.2);
  r.eval_points = logspace(1e-9, 1e-6, 7);
  const SlopeFit small = stein_slope_fit(r, Regime::small_eta);
  o.check(small.accepted && std::abs(small.fitted_slope - small.expected_slope) <= 0.05,
          "small_slope=" + std::to_string(small.fitted_slope));

  r.target = SteinTarget::power_cutoff(0.6);
  r.eval_points = logspace(1e2, 1e4, 7);
  const SlopeFit large = stein_slope_fit(r, Regime::large_eta);
  o.check(large.accepted && std::abs(large.fitted_slope - large.expected_slope) <= 0.05,
          "large_slope=" + std::to_string(large.fitted_slope));

  r.b = 0.4;
  r.target = SteinTarget::power_cutoff(0.4);
  r.eval_points = logspace(1e-9, 1e-3, 7);
  const SlopeFit edge = stein_slope_fit(r, Regime::small_eta);
  o.check(edge.log_correction_detected, "log_branch_missed");

  for (double b : {0.25, 0.5, 0.75})
    for (double t : {0.5, pi / 2, 2.0}) {
      r.b = b;
      r.target = SteinTarget::sign_propagator(t);
      r.eval_points = {0.5, 1.0, 2.0};
      const SteinResult res = stein_derivative(r);
      for (std::size_t i = 0; i < r.eval_points.size(); ++i) {
        const double x = r.eval_points[i];
        const double want = 2 * std::abs(std::sin(t)) / std::sqrt(2 * b) * std::pow(x, -b);
        o.check(std::abs(res.values[i] / want - 1) <= 1e-3, "closed_form(b=" + std::to_string(b) + ")");
      }
    }
}

void nonmembership(Outcome& o) {
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5};
  const std::pair<double, double> cases[] = {{-0.7, 0.8}, {-0.5, 1.0}, {0.3, 0.8}};
  for (auto [a, s] : cases) {
    const NonmembershipScan n = nonmembership_scan(a, 1.0, s, eps);
    o.check(n.divergent && n.fitted_c > 0 && n.relative_residual <= 0.1,
            "alpha=" + std::to_string(a) + " c=" + std::to_string(n.fitted_c));
  }
}

void identities(Outcome& o) {
  SimConfig c;
  c.alpha = 0.5;
  c.ic = InitialCondition::gaussian(0.1, 1.0, 0.0);
  c.t_final = 0.5;
  o.take(run_symmetry_checks(c, 2.0));
  c.alpha = -0.5;
  c.ic.zero_mean_projected = true;
  o.take(run_symmetry_checks(c, 2.0));
}

void probes(Outcome& o) {
  for (auto k : {ProbeKind::hilbert_frac, ProbeKind::frac_com, ProbeKind::triple, ProbeKind::projector,
                 ProbeKind::hilbert_local}) {
    const ProbeEnsemble e = probe_ensemble(k, ProbeParams{}, 50);
    o.check(e.finite && e.stable, to_string(k) + " max=" + std::to_string(e.max_ratio) +
                                      " doubled=" + std::to_string(e.max_ratio_doubled));
  }
}

void solver(Outcome& o) {
  SimConfig c;
  c.alpha = 0.5;
  c.ic = InitialCondition::gaussian(0.1, 1.0, 0.0);
  c.t_final = 0.5;
  o.take(run_convergence(c));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"conservation", conservation}, {"moment law", moment_law},         {"t*", tstar},
      {"Burgers-Hilbert jump", burgers_hilbert}, {"decay thresholds", decay}, {"Stein asymptotics", stein},
      {"non-membership", nonmembership}, {"operator identities", identities}, {"commutator probes", probes},
      {"solver validity", solver}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("error: ") + e.what());
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s %s (%.1fs)%s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), sec,
                o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
