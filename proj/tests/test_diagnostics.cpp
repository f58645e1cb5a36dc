#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fkdv/decay_fit.hpp"
#include "fkdv/diagnostics.hpp"
#include "fkdv/errors.hpp"
#include "fkdv/operators.hpp"
#include "fkdv/solver.hpp"
#include "fkdv/transform.hpp"

using namespace fkdv;
using std::numbers::pi;

TEST_CASE("invariants of simple fields") {
  auto g = make_grid(64, 2.0 * pi);
  const Field c2 = sample(g, [](double x) { return std::cos(2 * x); });
  const Invariants a = invariants(c2, 1.0);
  REQUIRE(a.i3);
  CHECK(*a.i3 == doctest::Approx(2 * pi).epsilon(1e-13));
  CHECK(a.i2 == doctest::Approx(pi).epsilon(1e-13));

  auto big = make_grid(4096, 200.0);
  const Field odd = sample(big, [](double x) { return x * std::exp(-x * x); });
  CHECK(std::abs(invariants(odd, 0.5).i1) < 1e-12 * l2_norm(odd));

  const Field gau = sample(big, [](double x) { return std::exp(-x * x); });
  CHECK(std::abs(invariants(gau, 0.5).i1 - std::sqrt(pi)) < 1e-10);

  // negative order on nonzero mean: I3 absent with a reason
  const Invariants n = invariants(gau, -0.5);
  CHECK_FALSE(n.i3);
  CHECK_FALSE(n.i3_note.empty());
}

TEST_CASE("first moment") {
  auto g = make_grid(4096, 200.0);
  const Field f = sample(g, [](double x) { return x * std::exp(-x * x); });
  CHECK(std::abs(moment_first(f) - std::sqrt(pi) / 2) < 1e-10);
  const Field even = sample(g, [](double x) { return std::exp(-x * x) * (1 + x * x); });
  CHECK(std::abs(moment_first(even)) < 1e-12 * l2_norm(even));
  const Field h = sample(g, [](double x) { return -4 * x * std::exp(-x * x); });
  CHECK(moment_first(h) == doctest::Approx(-2 * std::sqrt(pi)).epsilon(1e-12));
  CHECK(moment_first(h) == doctest::Approx(-3.5449).epsilon(1e-4));
}

TEST_CASE("low-mode moment agrees with the Gaussian integral") {
  auto g = make_grid(4096, 200.0);
  const Field h = sample(g, [](double x) { return -4 * x * std::exp(-x * x); });
  for (double a : {-1.0, -0.5, 0.5})
    CHECK(std::abs(moment_low_modes(h, a) + 2 * std::sqrt(pi)) < 1e-6);
  CHECK_THROWS_AS(moment_low_modes(h, 0.5, 3), ConfigError);
}

TEST_CASE("moment flagged when the tail is contaminated") {
  auto g = make_grid(1024, 20.0);
  const Field wide = sample(g, [](double x) { return 1.0 / (1.0 + x * x); });
  CHECK_FALSE(moment_first_checked(wide).reliable);
  const Field narrow = sample(g, [](double x) { return x * std::exp(-x * x); });
  CHECK(moment_first_checked(narrow).reliable);
  CHECK(tail_fraction(Field(g)) == 0.0);
}

TEST_CASE("weighted norms") {
  auto g = make_grid(4096, 200.0);
  const Field f = sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(weighted_norm(f, 0.0) == l2_norm(f));
  const double exact = std::sqrt(std::sqrt(pi / 2) * 1.25);
  CHECK(weighted_norm(f, 1.0) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(weighted_norm(f, 1.0) == doctest::Approx(1.2518).epsilon(1e-4));

  const Field slow = sample(g, [](double x) { return 1.0 / (1.0 + x * x); });
  double prev = 0.0;
  for (double n : {1.0, 2.0, 5.0, 10.0, 30.0}) {
    const double w = weighted_norm(slow, 0.5, WeightSpec::truncated(n));
    CHECK(w > prev);
    prev = w;
  }
  CHECK(prev <= weighted_norm(slow, 0.5) * (1 + 1e-14));
  CHECK(weighted_norm(f, 0.5, WeightSpec::truncated(30.0)) == doctest::Approx(weighted_norm(f, 0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(weighted_norm(f, 1.5, WeightSpec::truncated(5.0)), ConfigError);
}

TEST_CASE("Sobolev norm and interpolation probe") {
  auto g = make_grid(2048, 80.0);
  const Field f = sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
  // J^1: int (1 + xi^2) |f_hat|^2 / 2pi = ||f||^2 + ||f'||^2
  const double fp2 = std::sqrt(pi / 2);  // int (2x e^{-x^2})^2
  CHECK(sobolev_norm(f, 1.0) == doctest::Approx(std::sqrt(std::sqrt(pi / 2) + fp2)).epsilon(1e-12));
  const double r = interpolation_probe(f, 2.0, 2.0, 0.5);
  CHECK(r > 0.0);
  CHECK(r < 10.0);
}

TEST_CASE("decay fit on constructed tails") {
  auto g = make_grid(8192, 400.0);
  const Field alg = sample(g, [](double x) { return 1.0 / (1.0 + x * x); });
  const DecayFit a = decay_fit(alg, 10.0, 120.0, 16);
  CHECK(a.accepted);
  CHECK(a.fitted_p == doctest::Approx(2.0).epsilon(0.01));
  CHECK(a.r_critical == doctest::Approx(1.5).epsilon(0.02));

  const Field gau = sample(g, [](double x) { return std::exp(-x * x / 4); });
  const DecayFit s = decay_fit(gau, 10.0, 120.0, 16);
  CHECK(s.super_algebraic);
  CHECK_FALSE(s.accepted);
  CHECK(std::isinf(s.fitted_p));

  CHECK_THROWS_AS(decay_fit(alg, 10.0, 150.0, 16), ConfigError);
}

TEST_CASE("decay fit of the linear Burgers-Hilbert flow") {
  // the periodic Hilbert kernel bends the 1/x tail, so keep the window well
  // inside the box
  auto g = make_grid(16384, 800.0);
  const Field u0 = sample(g, [](double x) { return std::exp(-x * x); });
  const Field u1 = linear_propagator(u0, 1.0, -1.0);
  const DecayFit d = decay_fit(u1, 10.0, 60.0, 16);
  CHECK(d.accepted);
  CHECK(std::abs(d.fitted_p - 1.0) <= 0.05);
  CHECK(d.r_critical == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("spectral jump of smooth data") {
  cplx prev_gap;
  for (double len : {200.0, 400.0}) {
    auto g = make_grid(int(len * 20), len);
    const Field f = sample(g, [](double x) { return x * std::exp(-x * x); });
    const JumpEstimate j = spectral_jump(f, true);
    // int x f = i m_plus, with an O(k1^2) bias after refinement
    const double err = std::abs(cplx(0, 1) * j.m_plus - std::sqrt(pi) / 2);
    CHECK(err < (len == 200.0 ? 5e-4 : 1.2e-4));
    // real data: u_hat(-k) = conj(u_hat(k))
    CHECK(std::abs(j.m_minus + std::conj(j.m_plus)) < 1e-13);
    const cplx gap = spectral_jump(f, false).m_plus - j.m_plus;
    if (len == 400.0) CHECK(std::abs(gap) == doctest::Approx(std::abs(prev_gap) / 2).epsilon(0.1));
    prev_gap = gap;
  }
  auto g = make_grid(4096, 200.0);
  const Field e = sample(g, [](double x) { return (1 - 2 * x * x) * std::exp(-x * x); });
  const JumpEstimate je = spectral_jump(e);
  CHECK(std::abs(je.m_minus + std::conj(je.m_plus)) < 1e-13);
  const Field gau = sample(g, [](double x) { return std::exp(-x * x); });
  CHECK_THROWS_AS(spectral_jump(gau), DomainError);
}

TEST_CASE("diagnostics record carries requested weights") {
  auto g = make_grid(1024, 40.0);
  const Field f = sample(g, [](double x) { return std::exp(-x * x); });
  RecordOptions opt;
  opt.weight_orders = {1.0, 2.0};
  opt.sobolev_s = 1.0;
  const DiagnosticsRecord r = make_record(0.5, f, 0.5, opt);
  REQUIRE(r.wnorms.size() == 2);
  CHECK(r.wnorms[0].first == 1.0);
  CHECK(r.wnorms[1].second == weighted_norm(f, 2.0));
  CHECK(r.zsnorm);
  CHECK(r.max_u == doctest::Approx(1.0));
}
