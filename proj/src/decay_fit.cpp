#include "fkdv/decay_fit.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "fkdv/errors.hpp"

namespace fkdv {

namespace {

struct PowerModel {
  double log_c = 0.0;
  double residual = 0.0;
};

PowerModel fit_for(double p, const std::vector<double>& r, const std::vector<double>& phi, double edge) {
  const double e = 1.0 - 2.0 * p;
  std::vector<double> d(r.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double shape = std::pow(r[i], e);
    if (std::isfinite(edge)) shape -= std::pow(edge, e);
    if (!(shape > 0.0)) return {0.0, 1e300};
    d[i] = std::log(phi[i]) - std::log(shape);
    mean += d[i];
  }
  mean /= double(r.size());
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / double(r.size()))};
}

// curvature of log phi against log R, from a quadratic least-squares fit
double log_curvature(const std::vector<double>& r, const std::vector<double>& phi) {
  const std::size_t m = r.size();
  double s[5] = {0, 0, 0, 0, 0}, t[3] = {0, 0, 0};
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(r[i]), y = std::log(phi[i]);
    double xp = 1.0;
    for (int k = 0; k < 5; ++k) {
      s[k] += xp;
      if (k < 3) t[k] += xp * y;
      xp *= x;
    }
  }
  // 3x3 normal equations by Cramer's rule
  const double a[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
  auto det3 = [](const double m3[3][3]) {
    return m3[0][0] * (m3[1][1] * m3[2][2] - m3[1][2] * m3[2][1]) -
           m3[0][1] * (m3[1][0] * m3[2][2] - m3[1][2] * m3[2][0]) +
           m3[0][2] * (m3[1][0] * m3[2][1] - m3[1][1] * m3[2][0]);
  };
  const double d = det3(a);
  if (std::abs(d) < 1e-300) return 0.0;
  double b[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = j == 2 ? t[i] : a[i][j];
  return det3(b) / d;
}

}  // namespace

DecayFit decay_fit_profile(std::vector<double> radii, std::vector<double> tail_mass, double edge,
                           double total_mass) {
  if (radii.size() != tail_mass.size() || radii.size() < 4)
    throw ConfigError("decay fit needs at least 4 radii with matching tail masses");
  DecayFit fit;
  fit.radii = std::move(radii);
  fit.tail_mass = std::move(tail_mass);
  fit.r_lo = fit.radii.front();
  fit.r_hi = fit.radii.back();
  const auto& r = fit.radii;
  const auto& phi = fit.tail_mass;

  for (std::size_t i = 1; i < phi.size(); ++i)
    if (phi[i] > phi[i - 1] * (1.0 + 1e-9) + 1e-300) {
      fit.note = "tail mass increases with R";
      return fit;
    }
  const double floor = 1e-26 * std::max(total_mass, 1e-300);
  if (phi.back() <= floor) {
    fit.super_algebraic = true;
    fit.fitted_p = std::numeric_limits<double>::infinity();
    fit.r_critical = fit.fitted_p;
    fit.note = "tail mass at round-off level: super-algebraic decay";
    return fit;
  }

  auto objective = [&](double p) { return fit_for(p, r, phi, edge).residual; };
  const auto [p, res] = boost::math::tools::brent_find_minima(objective, 0.5 + 1e-6, 30.0, 40);
  fit.fitted_p = p;
  fit.r_critical = p - 0.5;
  fit.residual = res;
  fit.accepted = res <= kDecayResidualMax && p < 29.0;
  if (!fit.accepted) {
    // a power law bends straight; faster-than-any-power tails keep steepening
    if (log_curvature(r, phi) < -0.5 || p >= 29.0) {
      fit.super_algebraic = true;
      fit.fitted_p = std::numeric_limits<double>::infinity();
      fit.r_critical = fit.fitted_p;
      fit.note = "log-log tail keeps steepening: super-algebraic decay";
    } else {
      fit.note = "power-law residual " + format_double(res) + " above threshold";
    }
  }
  return fit;
}

DecayFit decay_fit(const Field& f, double r_lo, double r_hi, int n_radii) {
  const double len = f.grid->length();
  if (!(r_lo > 0.0 && r_hi > r_lo)) throw ConfigError("decay window needs 0 < R_lo < R_hi");
  if (r_hi > kDecayWindowFraction * len + 1e-12)
    throw ConfigError("decay window R_hi = " + format_double(r_hi) + " exceeds 0.35 L = " +
                      format_double(kDecayWindowFraction * len));
  if (n_radii < 4) throw ConfigError("decay fit needs n_radii >= 4");
  const double dx = f.grid->dx();

  // cumulative tail mass sorted by |x|
  std::vector<std::pair<double, double>> by_r;
  by_r.reserve(f.samples.size());
  double total = 0.0;
  for (int j = 0; j < f.size(); ++j) {
    by_r.emplace_back(std::abs(f.grid->node(j)), f[j] * f[j] * dx);
    total += f[j] * f[j] * dx;
  }
  std::sort(by_r.begin(), by_r.end());
  std::vector<double> suffix(by_r.size() + 1, 0.0);
  for (std::size_t i = by_r.size(); i-- > 0;) suffix[i] = suffix[i + 1] + by_r[i].second;

  std::vector<double> radii(n_radii), phi(n_radii);
  for (int i = 0; i < n_radii; ++i) {
    radii[i] = r_lo * std::pow(r_hi / r_lo, double(i) / (n_radii - 1));
    const auto it = std::upper_bound(by_r.begin(), by_r.end(), std::make_pair(radii[i], 1e308));
    phi[i] = suffix[std::size_t(it - by_r.begin())];
  }
  return decay_fit_profile(std::move(radii), std::move(phi), 0.5 * len, total);
}

}  // namespace fkdv
