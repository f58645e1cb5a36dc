#include "fkdv/fourier_oracle.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "fkdv/errors.hpp"

namespace fkdv {

double inverse_on_line(const HalfSpectrum& u_hat, double x, const OracleOptions& opt) {
  if (!(opt.xi_max > 0.0)) throw ConfigError("oracle xi_max must be positive");
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const double s_max = std::sqrt(opt.xi_max);
  // d/ds of the phase is 2 s (|x| + rate); keep about half a period per panel
  const double turns = 2.0 * opt.xi_max * (std::abs(x) + opt.phase_rate) / (2.0 * std::numbers::pi);
  const int panels = std::max(opt.min_panels, int(std::ceil(2.0 * turns)));
  const double h = s_max / panels;
  const auto& nodes = Rule::abscissa();
  const auto& weights = Rule::weights();

  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h, half = 0.5 * h;
    double part = 0.0;
    auto eval = [&](double s) {
      const double xi = s * s;
      return (u_hat(xi) * std::exp(cplx(0.0, x * xi))).real() * 2.0 * s;
    };
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const double w = weights[q];
      if (nodes[q] == 0.0) {
        part += w * eval(mid);
      } else {
        part += w * (eval(mid - half * nodes[q]) + eval(mid + half * nodes[q]));
      }
    }
    acc += part * half;
  }
  return acc / std::numbers::pi;
}

}  // namespace fkdv
