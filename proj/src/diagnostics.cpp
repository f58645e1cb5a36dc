#include "fkdv/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "fkdv/errors.hpp"
#include "fkdv/kernels.hpp"
#include "fkdv/operators.hpp"
#include "fkdv/transform.hpp"
#include "fkdv/truncated_weight.hpp"

namespace fkdv {

namespace {

double sum_dx(const Field& f, std::span<const double> v) { return kernels::chunked_sum(v) * f.grid->dx(); }

}  // namespace

Invariants invariants(const Field& f, double alpha) {
  Invariants out;
  out.i1 = mean_value(f);
  out.i2 = l2_norm_sq(f);
  try {
    const Field d = frac_deriv(f, 0.5 * alpha);
    std::vector<double> cube(f.samples.size());
    for (std::size_t j = 0; j < cube.size(); ++j) cube[j] = f.samples[j] * f.samples[j] * f.samples[j];
    out.i3 = l2_norm_sq(d) - sum_dx(f, cube) / 3.0;
  } catch (const DomainError& e) {
    out.i3_note = e.what();
  }
  return out;
}

double moment_first(const Field& f) {
  std::vector<double> xf(f.samples.size());
  kernels::product(f.samples, f.grid->nodes(), xf);
  return sum_dx(f, xf);
}

double moment_low_modes(const Field& f, double alpha, int modes) {
  const auto& g = *f.grid;
  std::vector<double> ex;
  for (double e : {2.0 * (1.0 + alpha), 2.0 + alpha, 2.0, 4.0})
    if (e > 1e-9 && std::none_of(ex.begin(), ex.end(), [&](double v) { return std::abs(v - e) < 1e-9; }))
      ex.push_back(e);
  const int cols = int(ex.size()) + 1;
  if (modes < cols + 1 || modes >= g.n() / 3) throw ConfigError("moment_low_modes: mode count out of range");
  const Spectrum s = forward(f);
  const double kmax = modes * g.k1();
  // columns scaled to O(1) on the fitted band, then modified Gram-Schmidt
  std::vector<std::vector<double>> q(cols, std::vector<double>(modes));
  std::vector<double> y(modes);
  for (int j = 0; j < modes; ++j) {
    const double k = (j + 1) * g.k1();
    y[j] = -s[j + 1].imag() / k;
    q[0][j] = 1.0;
    for (int c = 1; c < cols; ++c) q[c][j] = std::pow(k / kmax, ex[c - 1]);
  }
  std::vector<std::vector<double>> r(cols, std::vector<double>(cols, 0.0));
  for (int c = 0; c < cols; ++c) {
    for (int p = 0; p < c; ++p) {
      double d = 0.0;
      for (int j = 0; j < modes; ++j) d += q[p][j] * q[c][j];
      r[p][c] = d;
      for (int j = 0; j < modes; ++j) q[c][j] -= d * q[p][j];
    }
    double nrm = 0.0;
    for (int j = 0; j < modes; ++j) nrm += q[c][j] * q[c][j];
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0)) throw NumericError("moment_low_modes: singular fit");
    r[c][c] = nrm;
    for (int j = 0; j < modes; ++j) q[c][j] /= nrm;
  }
  std::vector<double> z(cols);
  for (int c = 0; c < cols; ++c) {
    double d = 0.0;
    for (int j = 0; j < modes; ++j) d += q[c][j] * y[j];
    z[c] = d;
  }
  for (int c = cols - 1; c >= 0; --c) {
    for (int p = c + 1; p < cols; ++p) z[c] -= r[c][p] * z[p];
    z[c] /= r[c][c];
  }
  return z[0];
}

MomentEstimate moment_first_checked(const Field& f, double tail_tol) {
  return {moment_first(f), tail_fraction(f) <= tail_tol};
}

double tail_fraction(const Field& f) {
  const double edge = kTailEdge * f.grid->length();
  std::vector<double> mask(f.samples.size());
  for (int j = 0; j < f.size(); ++j) mask[j] = std::abs(f.grid->node(j)) >= edge ? 1.0 : 0.0;
  std::vector<double> ones(f.samples.size(), 1.0);
  const double total = kernels::weighted_square_sum(f.samples, ones);
  if (total == 0.0) return 0.0;
  return kernels::weighted_square_sum(f.samples, mask) / total;
}

double weighted_norm(const Field& f, double r, WeightSpec weight) {
  if (r < 0.0) throw ConfigError("weight order r must be non-negative, got " + format_double(r));
  if (r == 0.0) return l2_norm(f);
  std::vector<double> w(f.samples.size());
  if (weight.truncation > 0.0) {
    if (r > 1.0) throw ConfigError("truncated weight order r must lie in (0, 1], got " + format_double(r));
    // <x>_N raised to r; the truncation profile itself is the theta = 1 one
    const std::vector<double> base = truncated_weight(*f.grid, weight.truncation, 1.0);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::pow(base[j], 2.0 * r);
  } else {
    for (int j = 0; j < f.size(); ++j) w[j] = japanese(f.grid->node(j), 2.0 * r);
  }
  return std::sqrt(kernels::weighted_square_sum(f.samples, w) * f.grid->dx());
}

double sobolev_norm(const Field& f, double s) {
  if (s == 0.0) return l2_norm(f);
  return l2_norm(bessel(f, s));
}

double interpolation_probe(const Field& f, double a, double b, double theta1) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigError("interpolation probe needs a, b > 0");
  if (!(theta1 > 0.0 && theta1 < 1.0)) throw ConfigError("interpolation probe needs theta1 in (0,1)");
  Field g(f.grid);
  for (int j = 0; j < f.size(); ++j) g[j] = japanese(f.grid->node(j), (1.0 - theta1) * b) * f[j];
  const double lhs = sobolev_norm(g, theta1 * a);
  const double wb = weighted_norm(f, b);
  const double ja = sobolev_norm(f, a);
  const double den = std::pow(wb, 1.0 - theta1) * std::pow(ja, theta1);
  if (!(den > 0.0) || !std::isfinite(den)) throw DegenerateInput("interpolation probe denominator vanishes");
  return lhs / den;
}

JumpEstimate spectral_jump(const Field& f, bool refine) {
  const Spectrum s = forward(f);
  const double scale = std::sqrt(f.grid->length()) * l2_norm(f);
  if (std::abs(s[0]) > kMeanTol * scale)
    throw DomainError("spectral jump needs zero mean, got mean " + format_double(std::abs(s[0])));
  const int n = f.grid->n();
  const double k1 = f.grid->k1();
  JumpEstimate out;
  if (!refine) {
    out.m_plus = s[1] / k1;
    out.m_minus = s[n - 1] / (-k1);
  } else {
    out.m_plus = 2.0 * s[1] / k1 - s[2] / (2.0 * k1);
    out.m_minus = 2.0 * s[n - 1] / (-k1) - s[n - 2] / (-2.0 * k1);
  }
  return out;
}

DiagnosticsRecord make_record(double t, const Field& f, double alpha, const RecordOptions& opt) {
  DiagnosticsRecord r;
  r.t = t;
  const Invariants inv = invariants(f, alpha);
  r.i1 = inv.i1;
  r.i2 = inv.i2;
  r.i3 = inv.i3;
  r.mean = inv.i1;
  r.moment_x = moment_first(f);
  r.max_u = *std::max_element(f.samples.begin(), f.samples.end());
  const Field ux = derivative(f);
  r.min_ux = *std::min_element(ux.samples.begin(), ux.samples.end());
  for (double v : ux.samples) r.max_abs_ux = std::max(r.max_abs_ux, std::abs(v));
  r.tail_frac = tail_fraction(f);
  for (double w : opt.weight_orders) r.wnorms.emplace_back(w, weighted_norm(f, w));
  if (opt.sobolev_s) r.zsnorm = sobolev_norm(f, *opt.sobolev_s);
  if (opt.jump) {
    try {
      r.jump = spectral_jump(f).m_plus;
    } catch (const DomainError&) {
    }
  }
  if (opt.hilbert_wnorm) r.hilbert_wnorm = weighted_norm(hilbert(f), 0.5);
  return r;
}

}  // namespace fkdv
