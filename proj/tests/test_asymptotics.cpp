#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fkdv/errors.hpp"
#include "fkdv/initial_condition.hpp"
#include "fkdv/probes.hpp"
#include "fkdv/stein.hpp"

using namespace fkdv;
using std::numbers::pi;

namespace {

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, double(i) / (n - 1)));
  return v;
}

double sign_prop_exact(double b, double t, double x) {
  return 2.0 * std::abs(std::sin(t)) / std::sqrt(2.0 * b) * std::pow(std::abs(x), -b);
}

}  // namespace

TEST_CASE("Stein derivative of a constant vanishes") {
  SteinRequest r;
  r.b = 0.4;
  r.target = SteinTarget::constant_one();
  r.eval_points = {-3.0, 0.0, 0.01, 5.0};
  for (double v : stein_derivative(r).values) CHECK(v == 0.0);

  r.target = SteinTarget::propagator(0.5, 0.0);
  for (double v : stein_derivative(r).values) CHECK(v == 0.0);
}

TEST_CASE("sign propagator closed form") {
  SteinRequest r;
  r.b = 0.5;
  r.target = SteinTarget::sign_propagator(pi / 2);
  r.eval_points = {1.0};
  CHECK(stein_derivative(r).values[0] == doctest::Approx(2.0).epsilon(1e-3));

  for (double b : {0.25, 0.75})
    for (double t : {0.5, 2.0}) {
      r.b = b;
      r.target = SteinTarget::sign_propagator(t);
      r.eval_points = {0.5, 2.0, -1.0};
      const SteinResult res = stein_derivative(r);
      for (std::size_t i = 0; i < r.eval_points.size(); ++i)
        CHECK(res.values[i] == doctest::Approx(sign_prop_exact(b, t, r.eval_points[i])).epsilon(1e-8));
    }
}

TEST_CASE("Stein derivative scales with dilation") {
  const double lam = 2.5, b = 0.35;
  for (double eta : {0.01, 0.3, 1.2}) {
    SteinRequest a;
    a.b = b;
    a.target = SteinTarget::power_cutoff(0.2).dilated(lam);
    a.eval_points = {eta};
    SteinRequest c = a;
    c.target = SteinTarget::power_cutoff(0.2);
    c.eval_points = {lam * eta};
    CHECK(stein_derivative(a).values[0] ==
          doctest::Approx(std::pow(lam, b) * stein_derivative(c).values[0]).epsilon(1e-10));
  }
}

TEST_CASE("power target above the threshold stays bounded near zero") {
  SteinRequest r;
  r.b = 0.3;
  r.target = SteinTarget::power_cutoff(0.6);
  r.eval_points = {1e-3, 2e-3};
  const SteinResult res = stein_derivative(r);
  const double ratio = res.values[1] / res.values[0];
  CHECK(ratio <= std::pow(2.0, 0.3));
  CHECK(ratio >= std::pow(2.0, -0.3));
}

TEST_CASE("slope fits") {
  SteinRequest r;
  r.b = 0.5;
  r.target = SteinTarget::power_cutoff(0.2);
  r.eval_points = logspace(1e-9, 1e-6, 7);
  const SlopeFit small = stein_slope_fit(r, Regime::small_eta);
  CHECK(small.accepted);
  CHECK(small.fitted_slope == doctest::Approx(-0.3).epsilon(0.05 / 0.3));
  CHECK(std::abs(small.fitted_slope + 0.3) <= 0.05);

  r.target = SteinTarget::power_cutoff(0.6);
  r.eval_points = logspace(1e2, 1e4, 7);
  const SlopeFit large = stein_slope_fit(r, Regime::large_eta);
  CHECK(large.accepted);
  CHECK(std::abs(large.fitted_slope + 1.0) <= 0.05);

  r.b = 0.4;
  r.target = SteinTarget::power_cutoff(0.4);
  r.eval_points = logspace(1e-9, 1e-3, 7);
  const SlopeFit edge = stein_slope_fit(r, Regime::small_eta);
  CHECK(edge.log_correction_detected);
  CHECK(edge.log_slope > 0.0);
  CHECK(edge.method == "log_test");

  r.b = 0.3;
  r.target = SteinTarget::power_cutoff(0.6);
  r.eval_points = logspace(1e-6, 1e-3, 7);
  const SlopeFit sat = stein_slope_fit(r, Regime::small_eta);
  CHECK(sat.method == "saturation");
  CHECK(sat.accepted);
}

TEST_CASE("propagator Stein bound") {
  const PropagatorBound p = propagator_stein_bound(0.5, 0.5, {0.5, 1.0, 2.0}, {0.1, 1.0, 10.0});
  CHECK(std::isfinite(p.c));
  CHECK(p.c > 0.0);
  CHECK(p.stable);
  CHECK_FALSE(p.log_branch_used);

  const PropagatorBound q = propagator_stein_bound(-0.5, 0.5, {0.5, 1.0, 2.0}, {1e-3, 1e-2, 0.1});
  CHECK(std::isfinite(q.c));
  CHECK(q.stable);
  CHECK(q.log_branch_used);

  const PropagatorBound z = propagator_stein_bound(0.5, 0.5, {0.0}, {0.1, 1.0});
  CHECK(z.c == 0.0);
}

TEST_CASE("nonmembership scan") {
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5};
  const NonmembershipScan s = nonmembership_scan(-0.7, 1.0, 0.8, eps);
  CHECK(s.divergent);
  CHECK(s.fitted_c > 0.0);
  CHECK(s.relative_residual <= 0.1);
  for (std::size_t i = 1; i < s.q2.size(); ++i) CHECK(s.q2[i] > s.q2[i - 1]);

  const NonmembershipScan z = nonmembership_scan(-0.7, 0.0, 0.8, eps);
  CHECK_FALSE(z.divergent);

  const NonmembershipScan p = nonmembership_scan(0.3, 1.0, 0.8, eps);
  CHECK(p.divergent);
}

TEST_CASE("commutator probes on simple inputs") {
  auto g = make_grid(1024, 64.0);
  const Field f = make_initial(g, InitialCondition::gaussian(1, 1, 0));
  Field c(g);
  for (auto& v : c.samples) v = 3.0;
  ProbeParams p;
  for (auto k : {ProbeKind::hilbert_frac, ProbeKind::frac_com, ProbeKind::triple, ProbeKind::projector,
                 ProbeKind::hilbert_local})
    CHECK(commutator_probe(k, c, f, p) == 0.0);
  const double r = commutator_probe(ProbeKind::hilbert_frac, f, f, p);
  CHECK(r > 0.0);
  CHECK(r <= 10.0);
}

TEST_CASE("probe parameters are validated") {
  ProbeParams p;
  p.beta = 1.5;
  CHECK_THROWS_WITH_AS(validate_probe(ProbeKind::frac_com, p), "frac_com requires 0 < beta <= 1", ConfigError);
  CHECK_NOTHROW(validate_probe(ProbeKind::hilbert_frac, p));
  p = ProbeParams{};
  p.l = 0;
  p.m = 0;
  CHECK_THROWS_AS(validate_probe(ProbeKind::hilbert_local, p), ConfigError);
  CHECK_THROWS_AS(parse_probe_kind("nope"), ConfigError);
  CHECK(parse_probe_kind("triple") == ProbeKind::triple);
  CHECK(to_string(ProbeKind::hilbert_local) == "hilbert_local");
}

TEST_CASE("small probe ensemble is stable under refinement") {
  const ProbeEnsemble e = probe_ensemble(ProbeKind::frac_com, ProbeParams{}, 10);
  CHECK(e.finite);
  CHECK(e.stable);
  CHECK(e.max_ratio >= e.median);
}
