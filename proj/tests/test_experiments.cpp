#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "fkdv/errors.hpp"
#include "fkdv/experiments.hpp"

using namespace fkdv;
using std::numbers::pi;

namespace {

SimConfig odd(double a, double alpha, double t_final) {
  SimConfig c;
  c.alpha = alpha;
  c.t_final = t_final;
  c.ic = InitialCondition::odd_gaussian(a, 1.0);
  return c;
}

bool mentions(const ConfigError& e, const std::string& what) { return std::string(e.what()).find(what) != std::string::npos; }

}  // namespace

TEST_CASE("metric rules") {
  CHECK(within("a", 1.05, 1.0, 0.1).pass);
  CHECK_FALSE(within("a", 1.2, 1.0, 0.1).pass);
  CHECK(at_most("b", 1e-7, 1e-6).pass);
  CHECK_FALSE(at_most("b", std::nan(""), 1e-6).pass);
  CHECK(at_least("c", 9.0, 8.0).pass);
  ExperimentReport r{"x", {}, {}, {}};
  CHECK_FALSE(r.passed());
  r.metrics.push_back(at_least("c", 9.0, 8.0));
  CHECK(r.passed());
  CHECK(r.metric("c").measured == 9.0);
  CHECK_THROWS_AS(r.metric("nope"), ConfigError);
}

TEST_CASE("moment law on zero data") {
  SimConfig c = odd(0.0, 0.5, 0.2);
  const ExperimentReport r = run_moment_law(c);
  for (const auto& m : r.metrics) CHECK(m.measured == 0.0);
  CHECK(r.passed());
}

TEST_CASE("moment law requires zero-mean data") {
  SimConfig c;
  c.t_final = 0.2;
  try {
    run_moment_law(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "zero-mean"));
  }
  c.alpha = -1.0;
  c.ic = InitialCondition::odd_gaussian(1.0, 1.0);
  CHECK_THROWS_AS(run_moment_law(c), ConfigError);
}

TEST_CASE("t* preconditions") {
  try {
    run_tstar(odd(4.0, 0.5, 3.0));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "not positive"));
  }
  try {
    run_tstar(odd(-4.0, 0.5, 2.0));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "horizon"));
  }
}

TEST_CASE("symmetry checks") {
  SimConfig c;
  c.alpha = 0.5;
  c.ic = InitialCondition::gaussian(0.1, 1.0, 0.0);
  c.t_final = 0.5;
  const ExperimentReport one = run_symmetry_checks(c, 1.0);
  CHECK(one.metric("scaling_residual").measured < 1e-14);
  const ExperimentReport two = run_symmetry_checks(c, 2.0);
  CHECK(two.passed());
  CHECK(two.metric("scaling_residual").measured <= 1e-6);

  c.alpha = -0.5;
  c.ic.zero_mean_projected = true;
  const ExperimentReport neg = run_symmetry_checks(c, 2.0);
  CHECK(neg.metric("commutator_line").measured <= 1e-8);
  CHECK(neg.passed());
  CHECK_THROWS_AS(run_symmetry_checks(c, 0.0), ConfigError);
}

TEST_CASE("two-time identity over a full period") {
  SimConfig c = odd(0.5, -1.0, 1.0);
  c.length = 100.0;
  c.n = 2048;
  const ExperimentReport r = run_two_time_bh(c, 0.5, 0.5 + 2 * pi);
  const double l2 = 0.25 * std::sqrt(pi / 2);
  CHECK(std::abs(r.metric("identity_residual").measured) <= 1e-6 * l2);
  CHECK(r.metric("linear_rotation").measured <= 1e-6);
  CHECK_THROWS_AS(run_two_time_bh(odd(0.5, -0.5, 1.0), 0.5, 1.0), ConfigError);
  CHECK_THROWS_AS(run_two_time_bh(c, 1.0, 0.5), ConfigError);
}

TEST_CASE("small data does not break") {
  SimConfig c = odd(-0.03, -1.0, 3.0);
  c.length = 50.0;
  c.n = 2048;
  c.tail_tol = 1e-4;
  const ExperimentReport r = run_wave_breaking(c);
  CHECK(r.metric("onset_detected").measured == 0.0);
  CHECK(r.metric("control_gradient_ratio").pass);
  CHECK_THROWS_AS(run_wave_breaking(odd(-6.0, 0.5, 3.0)), ConfigError);
}

TEST_CASE("zero-mean data lifts the decay threshold") {
  SimConfig c;
  c.alpha = 0.5;
  c.nonlinear = false;
  c.ic.zero_mean_projected = true;
  const ExperimentReport r = run_decay_threshold(c, {2.0}, {200.0, 400.0, 800.0});
  CHECK(r.metric("convergence_r=2").pass);
  CHECK(r.passed());
}

TEST_CASE("experiment registry") {
  CHECK(experiment_names().size() == 8);
  CHECK_THROWS_AS(run_named("nope", SimConfig{}, ExperimentParams{}), ConfigError);
}
