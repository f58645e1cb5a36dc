#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fkdv/errors.hpp"
#include "fkdv/picard.hpp"
#include "fkdv/solver.hpp"
#include "fkdv/transform.hpp"

using namespace fkdv;
using std::numbers::pi;

namespace {

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double l2_diff(const Field& a, const Field& b) {
  Field d = a;
  for (int j = 0; j < d.size(); ++j) d[j] -= b[j];
  return l2_norm(d);
}

Field run_to(SimConfig c, double dt, double t) {
  c.dt = dt;
  c.t_final = t;
  c.diag_every = 1 << 30;
  return solve_from(c, make_initial(make_grid(c.n, c.length), c.ic)).final_state;
}

}  // namespace

TEST_CASE("linear propagator basics") {
  auto g = make_grid(128, 2.0 * pi);
  const Field f = sample(g, [](double x) { return std::sin(3 * x) + 0.5 * std::cos(x); });
  CHECK(max_diff(linear_propagator(f, 0.0, 0.5), f) < 1e-15);

  for (int k : {1, 2, 5})
    for (double t : {0.3, 1.7}) {
      const Field s = sample(g, [&](double x) { return std::sin(k * x); });
      const Field want = sample(g, [&](double x) { return std::sin(k * x + t); });
      CHECK(max_diff(linear_propagator(s, t, -1.0), want) < 1e-13);
    }

  auto big = make_grid(1024, 40.0);
  const Field gau = sample(big, [](double x) { return std::exp(-x * x) * (1 + x); });
  CHECK(l2_norm(linear_propagator(gau, 1.3, 0.5)) == doctest::Approx(l2_norm(gau)).epsilon(1e-12));
  // group property
  const Field ab = linear_propagator(linear_propagator(gau, 0.4, -0.5), 0.9, -0.5);
  CHECK(max_diff(ab, linear_propagator(gau, 1.3, -0.5)) < 1e-13);
}

TEST_CASE("nonlinear term") {
  auto g = make_grid(64, 2.0 * pi);
  CHECK(max_diff(nonlinear_term(Field(g), true), Field(g)) == 0.0);
  const Field s = sample(g, [](double x) { return std::sin(x); });
  const Field want = sample(g, [](double x) { return -0.5 * std::sin(2 * x); });
  CHECK(max_diff(nonlinear_term(s, true), want) < 1e-14);
  CHECK(max_diff(nonlinear_term(s, false), want) < 1e-14);

  auto big = make_grid(1024, 40.0);
  const Field f = sample(big, [](double x) { return std::exp(-x * x) * (1 + 0.3 * x); });
  const Field nf = nonlinear_term(f, true);
  double dot = 0.0;
  for (int j = 0; j < big->n(); ++j) dot += f[j] * nf[j] * big->dx();
  CHECK(std::abs(dot) < 1e-12 * std::pow(l2_norm(f), 3));
}

TEST_CASE("IF-RK4 step") {
  SimConfig c;
  c.alpha = -0.5;
  c.nonlinear = false;
  auto g = make_grid(c.n, c.length);
  Field f = sample(g, [](double x) { return x * std::exp(-x * x); });
  CHECK(max_diff(step_ifrk4(f, 1e-3, c), linear_propagator(f, 1e-3, c.alpha)) < 1e-15);

  c.nonlinear = true;
  CHECK(max_diff(step_ifrk4(Field(g), 1e-3, c), Field(g)) == 0.0);

  // CFL re-check reports an admissible step
  try {
    step_ifrk4(f, 1.0, c);
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.suggested_dt() == doctest::Approx(cfl_limit(f)));
    CHECK(e.suggested_dt() < 1.0);
  }
}

TEST_CASE("zero data gives a zero trajectory") {
  SimConfig c;
  c.ic = InitialCondition::gaussian(0.0, 1.0, 0.0);
  c.t_final = 0.2;
  const Trajectory tr = solve(c);
  CHECK(tr.diagnostics.size() == 3);
  for (const auto& r : tr.diagnostics) {
    CHECK(r.i1 == 0.0);
    CHECK(r.i2 == 0.0);
    CHECK(r.i3.value_or(1.0) == 0.0);
    CHECK(r.max_u == 0.0);
  }
  for (double v : tr.final_state.samples) CHECK(v == 0.0);
}

TEST_CASE("L2 norm conserved at the reference resolution") {
  SimConfig c;
  c.alpha = 0.5;
  const Trajectory tr = solve(c);
  CHECK_FALSE(tr.truncated);
  const double i2 = tr.diagnostics.front().i2;
  for (const auto& r : tr.diagnostics) CHECK(std::abs(r.i2 - i2) / i2 <= 1e-8);
  CHECK(tr.times.back() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rows land on the horizon when dt does not divide it") {
  SimConfig c;
  c.dt = 0.003;
  c.t_final = 0.1;
  c.diag_every = 10;
  const Trajectory tr = solve(c);
  CHECK(tr.times.back() == 0.1);
  CHECK(tr.times[1] == doctest::Approx(0.03));
}

TEST_CASE("fourth order in dt") {
  SimConfig c;
  c.alpha = 0.5;
  c.ic = InitialCondition::gaussian(0.1, 1.0, 0.0);
  const double dt = 0.02;
  const Field ref = run_to(c, dt / 8, 0.5);
  const double e1 = l2_diff(run_to(c, dt, 0.5), ref), e2 = l2_diff(run_to(c, dt / 2, 0.5), ref);
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Picard oracle") {
  SimConfig c;
  c.alpha = 0.5;
  c.ic = InitialCondition::gaussian(0.1, 1.0, 0.0);
  auto g = make_grid(c.n, c.length);
  const Field u0 = make_initial(g, c.ic);
  CHECK(max_diff(picard_oracle(u0, c, 0.3, 0), linear_propagator(u0, 0.3, c.alpha)) < 1e-15);
  CHECK(max_diff(picard_oracle(Field(g), c, 0.3, 4), Field(g)) == 0.0);
  const Field p = picard_oracle(u0, c, 0.05, 6);
  const Field s = run_to(c, 1e-3, 0.05);
  CHECK(l2_diff(p, s) / l2_norm(p) <= 1e-6);
}

TEST_CASE("tail contamination truncates the run") {
  SimConfig c;
  c.alpha = -0.5;
  c.length = 40.0;
  c.n = 1024;
  c.t_final = 20.0;
  c.dt = 1e-2;
  c.diag_every = 10;
  const Trajectory tr = solve(c);
  CHECK(tr.truncated);
  CHECK(tr.truncation_time < 20.0);
  CHECK(tr.diagnostics.back().tail_frac > c.tail_tol);
}

TEST_CASE("config validation names the key") {
  SimConfig c;
  c.alpha = 0.0;
  CHECK_THROWS_WITH_AS(validate(c), "alpha must be nonzero", ConfigError);
  c.alpha = 1.5;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.extended = true;
  CHECK_NOTHROW(validate(c));
  c = SimConfig{};
  c.n = 1001;
  CHECK_THROWS_AS(validate(c), ConfigError);
}
