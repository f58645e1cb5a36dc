#include "fkdv/multiplier.hpp"

#include <cmath>

#include "fkdv/errors.hpp"
#include "fkdv/kernels.hpp"
#include "fkdv/transform.hpp"

namespace fkdv {

namespace {
constexpr cplx I{0.0, 1.0};

double sgn(double k) { return (k > 0) - (k < 0); }
}  // namespace

namespace symbols {

MultiplierSymbol identity() { return {[](double) { return cplx(1.0); }, 1.0, "identity", true}; }

MultiplierSymbol derivative() { return {[](double k) { return I * k; }, 0.0, "d/dx", true}; }

MultiplierSymbol frac_deriv(double s) {
  return {[s](double k) { return cplx(std::pow(std::abs(k), s)); }, s == 0.0 ? 1.0 : 0.0,
          "D^" + format_double(s), true};
}

MultiplierSymbol hilbert() { return {[](double k) { return -I * sgn(k); }, 0.0, "H", true}; }

MultiplierSymbol bessel(double s) {
  return {[s](double k) { return cplx(std::pow(1.0 + k * k, 0.5 * s)); }, 1.0,
          "J^" + format_double(s), true};
}

MultiplierSymbol dispersion(double alpha) {
  return {[alpha](double k) { return I * k * std::pow(std::abs(k), alpha); }, 0.0,
          "dxD^" + format_double(alpha), true};
}

MultiplierSymbol propagator(double alpha, double t) {
  return {[alpha, t](double k) { return std::exp(I * (t * k * std::pow(std::abs(k), alpha))); },
          1.0, "exp(itk|k|^" + format_double(alpha) + ")", true};
}

MultiplierSymbol cutoff(double a) {
  return {[a](double k) { return cplx(cutoff_profile(k, a)); }, 1.0, "P_phi(" + format_double(a) + ")",
          true};
}

MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b) {
  auto ea = a.eval;
  auto eb = b.eval;
  return {[ea, eb](double k) { return ea(k) * eb(k); }, a.zero_mode_value * b.zero_mode_value,
          a.name + "*" + b.name, a.hermitian && b.hermitian};
}

}  // namespace symbols

double smooth_step(double r) {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / r);
  const double b = std::exp(-1.0 / (1.0 - r));
  return a / (a + b);
}

double cutoff_profile(double k, double a) { return 1.0 - smooth_step(std::abs(k) / a - 1.0); }

std::vector<cplx> symbol_table(const Grid& g, const MultiplierSymbol& m) {
  std::vector<cplx> t(g.n());
  t[0] = m.zero_mode_value;
  for (int i = 1; i < g.n(); ++i) {
    t[i] = m.eval(g.wavenumber(i));
    if (!std::isfinite(t[i].real()) || !std::isfinite(t[i].imag()))
      throw NumericError("multiplier " + m.name + " is not finite at k=" + format_double(g.wavenumber(i)));
  }
  return t;
}

void apply_in_place(Spectrum& s, const MultiplierSymbol& m) {
  kernels::multiply(s.coeffs, symbol_table(*s.grid, m));
}

Field apply_multiplier(const Field& f, const MultiplierSymbol& m) {
  if (!m.hermitian)
    throw DomainError("multiplier " + m.name + " is not Hermitian; use apply_multiplier_complex");
  Spectrum s = forward(f);
  apply_in_place(s, m);
  return inverse(s);
}

ComplexField apply_multiplier_complex(const Field& f, const MultiplierSymbol& m) {
  Spectrum s = forward(f);
  apply_in_place(s, m);
  return inverse_complex(s);
}

}  // namespace fkdv
