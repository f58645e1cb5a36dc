#include "fkdv/picard.hpp"

#include <cmath>

#include "fkdv/errors.hpp"
#include "fkdv/kernels.hpp"
#include "fkdv/transform.hpp"

namespace fkdv {

namespace {

double spectral_max_diff(const Spectrum& a, const Spectrum& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
  return m;
}

double spectral_max(const Spectrum& a) {
  double m = 0.0;
  for (const cplx& c : a.coeffs) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

Field picard_oracle(const Field& u0, const SimConfig& cfg, double t, int iterations, int panels) {
  if (iterations < 0) throw ConfigError("picard iterations must be non-negative");
  if (panels < 4) throw ConfigError("picard needs at least 4 panels");
  if (!all_finite(u0.samples)) throw NumericError("picard from a non-finite state");
  const Integrator it(u0.grid, cfg.alpha, cfg.dealias, true);
  const Spectrum u0h = forward(u0);
  if (iterations == 0) return inverse(it.propagate(u0h, t));

  const int m = panels;
  const double h = t / m;
  std::vector<Spectrum> v(m + 1, u0h);
  std::vector<Spectrum> f(m + 1, Spectrum(u0.grid));
  double prev_diff = -1.0;

  for (int iter = 0; iter < iterations; ++iter) {
    for (int i = 0; i <= m; ++i) {
      const double tau = i * h;
      f[i] = it.propagate(it.nonlinear(it.propagate(v[i], tau)), -tau);
    }
    std::vector<Spectrum> next(m + 1, u0h);
    Spectrum acc(u0.grid);
    for (int i = 0; i < m; ++i) {
      // integral over [tau_i, tau_{i+1}] from a cubic through four neighbours
      int lo;
      double w[4];
      if (i == 0) {
        lo = 0;
        w[0] = 9, w[1] = 19, w[2] = -5, w[3] = 1;
      } else if (i == m - 1) {
        lo = m - 3;
        w[0] = 1, w[1] = -5, w[2] = 19, w[3] = 9;
      } else {
        lo = i - 1;
        w[0] = -1, w[1] = 13, w[2] = 13, w[3] = -1;
      }
      for (int q = 0; q < 4; ++q) kernels::axpy(h * w[q] / 24.0, f[lo + q].coeffs, acc.coeffs);
      kernels::axpy(1.0, acc.coeffs, next[i + 1].coeffs);
    }
    double diff = 0.0;
    for (int i = 0; i <= m; ++i) {
      for (const cplx& c : next[i].coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
          throw OracleDivergence("picard iterate " + std::to_string(iter + 1) + " is not finite");
      diff = std::max(diff, spectral_max_diff(next[i], v[i]));
    }
    v = std::move(next);
    const double floor = 1e-13 * spectral_max(v[m]);
    if (prev_diff >= 0.0 && diff > prev_diff && diff > floor)
      throw OracleDivergence("picard iterates grow: update " + format_double(diff) + " after " +
                             format_double(prev_diff) + " at iteration " + std::to_string(iter + 1));
    prev_diff = diff;
  }
  return inverse(it.propagate(v[m], t));
}

}  // namespace fkdv
