#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fkdv/errors.hpp"
#include "fkdv/grid.hpp"
#include "fkdv/kernels.hpp"
#include "fkdv/multiplier.hpp"
#include "fkdv/operators.hpp"
#include "fkdv/transform.hpp"
#include "fkdv/truncated_weight.hpp"

using namespace fkdv;
using std::numbers::pi;

namespace {

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

GridPtr two_pi(int n = 64) { return make_grid(n, 2.0 * pi); }

}  // namespace

TEST_CASE("grid spacing and wavenumbers") {
  auto g = make_grid(8, 2.0 * pi);
  CHECK(g->dx() == doctest::Approx(pi / 4));
  std::vector<int> modes;
  for (int i = 0; i < 8; ++i) modes.push_back(int(std::lround(g->wavenumber(i))));
  std::sort(modes.begin(), modes.end());
  CHECK(modes == std::vector<int>{-4, -3, -2, -1, 0, 1, 2, 3});
  CHECK(g->node(0) == doctest::Approx(-pi));

  auto r = make_grid(4096, 200.0);
  CHECK(r->dx() == doctest::Approx(0.048828125));
  CHECK(r->k_max() == doctest::Approx(64.3).epsilon(1e-3));
}

TEST_CASE("bad grids are rejected") {
  CHECK_THROWS_AS(make_grid(8, -1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(7, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(8, 0.0), ConfigError);
}

TEST_CASE("transform round trip and Parseval") {
  auto g = make_grid(256, 20.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Field f(g);
  for (auto& v : f.samples) v = nd(rng);
  const Field back = inverse(forward(f));
  CHECK(max_diff(f, back) < 1e-13);
  CHECK(spectral_l2_norm_sq(forward(f)) == doctest::Approx(l2_norm_sq(f)).epsilon(1e-13));
}

TEST_CASE("forward approximates the continuous transform") {
  auto g = make_grid(512, 40.0);
  const Field f = sample(g, [](double x) { return std::exp(-x * x); });
  const Spectrum s = forward(f);
  for (int i : {0, 3, 17}) {
    const double k = g->wavenumber(i);
    CHECK(std::abs(s[i] - cplx(std::sqrt(pi) * std::exp(-k * k / 4.0))) < 1e-13);
  }
}

TEST_CASE("multiplier examples") {
  auto g = two_pi();
  const Field c2 = sample(g, [](double x) { return std::cos(2 * x); });
  CHECK(max_diff(apply_multiplier(c2, symbols::identity()), c2) < 1e-14);

  const Field s1 = sample(g, [](double x) { return std::sin(x); });
  const Field c1 = sample(g, [](double x) { return std::cos(x); });
  CHECK(max_diff(apply_multiplier(s1, symbols::derivative()), c1) < 1e-13);

  const Field half = apply_multiplier(c2, symbols::frac_deriv(0.5));
  CHECK(max_diff(half, sample(g, [](double x) { return std::sqrt(2.0) * std::cos(2 * x); })) < 1e-13);
}

TEST_CASE("fractional derivative on single modes") {
  auto g = two_pi();
  const Field c3 = sample(g, [](double x) { return std::cos(3 * x); });
  CHECK(max_diff(frac_deriv(c3, 0.5), sample(g, [](double x) { return std::sqrt(3.0) * std::cos(3 * x); })) <
        1e-13);
  const Field s = sample(g, [](double x) { return std::sin(x) + std::sin(2 * x); });
  const Field want = sample(g, [](double x) { return std::sin(x) + std::sin(2 * x) / std::sqrt(2.0); });
  CHECK(max_diff(frac_deriv(s, -0.5), want) < 1e-13);
}

TEST_CASE("negative order on nonzero mean is a domain error") {
  auto g = make_grid(1024, 40.0);
  const Field gauss = sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(mean_value(gauss) == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
  CHECK_THROWS_AS(frac_deriv(gauss, -0.5), DomainError);
  CHECK_NOTHROW(frac_deriv(gauss, 0.5));
}

TEST_CASE("zero mode of |k|^s") {
  auto g = two_pi();
  const Field one = sample(g, [](double) { return 1.0; });
  CHECK(max_diff(frac_deriv(one, 0.0), one) < 1e-14);
  const Field zero(g);
  CHECK(max_diff(frac_deriv(one, 0.5), zero) < 1e-14);
}

TEST_CASE("Hilbert transform examples") {
  auto g = two_pi();
  const Field s2 = sample(g, [](double x) { return std::sin(2 * x); });
  const Field c2 = sample(g, [](double x) { return std::cos(2 * x); });
  const Field s1 = sample(g, [](double x) { return std::sin(x); });
  Field neg_c2 = c2;
  for (auto& v : neg_c2.samples) v = -v;
  CHECK(max_diff(hilbert(s2), neg_c2) < 1e-13);
  CHECK(max_diff(hilbert(c2), s2) < 1e-13);
  Field neg_s1 = s1;
  for (auto& v : neg_s1.samples) v = -v;
  CHECK(max_diff(hilbert(hilbert(s1)), neg_s1) < 1e-13);
}

TEST_CASE("low-frequency projector") {
  auto g = two_pi(128);
  const Field s1 = sample(g, [](double x) { return std::sin(x); });
  const Field s10 = sample(g, [](double x) { return std::sin(10 * x); });
  CHECK(max_diff(projector_low(s1, {4.0}), s1) < 1e-14);
  CHECK(max_diff(projector_low(s10, {4.0}), Field(g)) < 1e-14);
  Field sum = s1;
  for (int j = 0; j < g->n(); ++j) sum[j] += s10[j];
  const Field a = projector_low(sum, {4.0}), b = projector_low(s1, {4.0}), c = projector_low(s10, {4.0});
  for (int j = 0; j < g->n(); ++j) CHECK(std::abs(a[j] - b[j] - c[j]) < 1e-14);
  CHECK_THROWS_AS(projector_low(s1, {100.0}), ConfigError);
}

TEST_CASE("cutoff profile is flat then vanishes") {
  CHECK(cutoff_profile(0.5, 1.0) == 1.0);
  CHECK(cutoff_profile(1.0, 1.0) == 1.0);
  CHECK(cutoff_profile(2.0, 1.0) == 0.0);
  CHECK(cutoff_profile(1.5, 1.0) > 0.0);
  CHECK(cutoff_profile(1.5, 1.0) < 1.0);
}

TEST_CASE("coordinate multiplication") {
  auto g = make_grid(1024, 40.0);
  const Field f = sample(g, [](double x) { return std::exp(-x * x); });
  const Field xf = coordinate_multiply(f);
  CHECK(max_diff(xf, sample(g, [](double x) { return x * std::exp(-x * x); })) < 1e-15);
  CHECK(max_diff(coordinate_multiply(xf), sample(g, [](double x) { return x * x * std::exp(-x * x); })) < 1e-14);
  double m = 0.0;
  for (int j = 0; j < g->n(); ++j) m += xf[j] * g->dx();
  CHECK(std::abs(m) < 1e-12 * l2_norm(f));
}

TEST_CASE("truncated weight values") {
  const TruncatedWeight w1(7.0, 0.3);
  CHECK(w1(0.0) == doctest::Approx(1.0));
  const TruncatedWeight w5(5.0, 0.5);
  CHECK(w5(20.0) == doctest::Approx(3.1623).epsilon(1e-4));
  CHECK(w5(-20.0) == doctest::Approx(std::sqrt(10.0)));
  const TruncatedWeight w(4.0, 1.0);
  CHECK(w(4.0) == doctest::Approx(std::sqrt(17.0)));
  // monotone and bounded by the plateau
  double prev = 0.0;
  for (double x = 0.0; x <= 20.0; x += 0.05) {
    CHECK(w(x) >= prev - 1e-15);
    CHECK(w(x) <= 8.0 + 1e-12);
    prev = w(x);
  }
  auto g = make_grid(256, 20.0);
  CHECK_THROWS_AS(truncated_weight(*g, 4.0, 0.5), ConfigError);
}

TEST_CASE("serial and OpenMP kernels agree bitwise") {
  const std::size_t n = 1 << 15;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(n), b(n);
  std::vector<cplx> z(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
    z[i] = {u(rng), u(rng)};
    w[i] = {u(rng), u(rng)};
  }
  CHECK(kernels::serial::chunked_sum(a) == kernels::omp::chunked_sum(a));
  CHECK(kernels::serial::weighted_square_sum(a, b) == kernels::omp::weighted_square_sum(a, b));

  auto z1 = z, z2 = z;
  kernels::serial::multiply(std::span<cplx>(z1), std::span<const cplx>(w));
  kernels::omp::multiply(std::span<cplx>(z2), std::span<const cplx>(w));
  CHECK(z1 == z2);
  kernels::serial::alternate_scale(z1, 0.25);
  kernels::omp::alternate_scale(z2, 0.25);
  CHECK(z1 == z2);
  kernels::serial::axpy(cplx(0.5, -1), w, z1);
  kernels::omp::axpy(cplx(0.5, -1), w, z2);
  CHECK(z1 == z2);

  std::vector<double> o1(n), o2(n);
  kernels::serial::square(a, o1);
  kernels::omp::square(a, o2);
  CHECK(o1 == o2);
  kernels::serial::product(a, b, o1);
  kernels::omp::product(a, b, o2);
  CHECK(o1 == o2);
}
