#include "fkdv/operators.hpp"

#include <cmath>

#include "fkdv/errors.hpp"
#include "fkdv/kernels.hpp"
#include "fkdv/multiplier.hpp"
#include "fkdv/transform.hpp"

namespace fkdv {

double mean_value(const Field& f) { return kernels::chunked_sum(f.samples) * f.grid->dx(); }

Field frac_deriv(const Field& f, double s, double mean_tol) {
  if (s < 0.0) {
    const double m = mean_value(f);
    const double scale = std::sqrt(f.grid->length()) * l2_norm(f);
    if (std::abs(m) > mean_tol * scale)
      throw DomainError("D^" + format_double(s) + " needs zero mean, got mean " + format_double(m));
  }
  return apply_multiplier(f, symbols::frac_deriv(s));
}

Field hilbert(const Field& f) { return apply_multiplier(f, symbols::hilbert()); }

Field derivative(const Field& f) { return apply_multiplier(f, symbols::derivative()); }

Field bessel(const Field& f, double s) { return apply_multiplier(f, symbols::bessel(s)); }

Field dispersion(const Field& f, double alpha) { return apply_multiplier(f, symbols::dispersion(alpha)); }

Field projector_low(const Field& f, const CutoffSpec& cutoff) {
  const double kn = std::abs(f.grid->wavenumber(f.grid->nyquist_index()));
  if (!(cutoff.a > 0.0) || cutoff.a > kn)
    throw ConfigError("cutoff a=" + format_double(cutoff.a) + " must lie in (0, " + format_double(kn) + "]");
  return apply_multiplier(f, symbols::cutoff(cutoff.a));
}

Field coordinate_multiply(const Field& f) {
  Field out(f.grid);
  kernels::product(f.samples, f.grid->nodes(), out.samples);
  return out;
}

}  // namespace fkdv
