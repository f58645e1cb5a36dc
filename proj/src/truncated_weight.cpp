#include "fkdv/truncated_weight.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "fkdv/errors.hpp"
#include "fkdv/multiplier.hpp"

namespace fkdv {

namespace {

double slope(double y, double theta) { return theta * y * std::pow(1.0 + y * y, 0.5 * theta - 1.0); }

}  // namespace

TruncatedWeight::TruncatedWeight(double n_w, double theta) : n_(n_w), theta_(theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw ConfigError("weight exponent theta must lie in (0,1], got " + format_double(theta));
  if (!(n_w >= 1.0) || !std::isfinite(n_w))
    throw ConfigError("weight truncation N must be >= 1, got " + format_double(n_w));
  plateau_ = std::pow(2.0 * n_, theta_);
  double lo = n_, hi = 2.0 * n_;
  // bridge(3N, x0) increases with x0; bracket is valid for N >= 1, theta in (0,1]
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bridge(3.0 * n_, mid) < plateau_)
      lo = mid;
    else
      hi = mid;
  }
  x0_ = 0.5 * (lo + hi);
}

double TruncatedWeight::bridge(double x, double x0) const {
  using boost::math::quadrature::gauss;
  const double gn = japanese(n_, theta_);
  if (x <= n_) return gn;
  auto integrand = [&](double y) { return slope(y, theta_) * (1.0 - smooth_step((y - x0) / n_)); };
  // the integrand is exactly g' below x0 and exactly 0 above x0 + N
  double total = 0.0;
  const double a1 = std::min(x, x0);
  if (a1 > n_) total += japanese(a1, theta_) - gn;
  const double b = std::min(x, x0 + n_);
  if (b > x0) {
    const int panels = 16;
    const double h = (b - x0) / panels;
    for (int p = 0; p < panels; ++p) total += gauss<double, 15>::integrate(integrand, x0 + p * h, x0 + (p + 1) * h);
  }
  return gn + total;
}

double TruncatedWeight::operator()(double x) const {
  const double a = std::abs(x);
  if (a <= n_) return japanese(a, theta_);
  if (a >= x0_ + n_) return plateau_;
  return bridge(a, x0_);
}

double TruncatedWeight::derivative(double x) const {
  const double a = std::abs(x);
  const double s = slope(a, theta_) * (1.0 - smooth_step((a - x0_) / n_));
  return x < 0 ? -s : s;
}

std::vector<double> truncated_weight(const Grid& g, double n_w, double theta) {
  if (!(3.0 * n_w < 0.5 * g.length()))
    throw ConfigError("truncated weight needs 3N < L/2, got N=" + format_double(n_w) +
                      " L=" + format_double(g.length()));
  TruncatedWeight w(n_w, theta);
  std::vector<double> out(g.n());
  for (int j = 0; j < g.n(); ++j) out[j] = w(g.node(j));
  return out;
}

}  // namespace fkdv
