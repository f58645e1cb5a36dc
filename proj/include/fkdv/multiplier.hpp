#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fkdv/grid.hpp"

namespace fkdv {

/// Fourier multiplier m(k). The k = 0 value is always explicit.
struct MultiplierSymbol {
  std::function<cplx(double)> eval;
  cplx zero_mode_value{1.0, 0.0};
  std::string name;
  /// m(-k) = conj(m(k)); real fields map to real fields.
  bool hermitian = true;
};

namespace symbols {
MultiplierSymbol identity();
/// ik
MultiplierSymbol derivative();
/// |k|^s; zero mode 1 for s = 0, else 0.
MultiplierSymbol frac_deriv(double s);
/// -i sign(k), sign(0) = 0.
MultiplierSymbol hilbert();
/// <k>^s = (1 + k^2)^{s/2}
MultiplierSymbol bessel(double s);
/// i k |k|^alpha, the symbol of d/dx D^alpha.
MultiplierSymbol dispersion(double alpha);
/// exp(i t k |k|^alpha); zero mode 1.
MultiplierSymbol propagator(double alpha, double t);
/// Flat-top cutoff: 1 on |k| <= a, 0 on |k| >= 2a.
MultiplierSymbol cutoff(double a);
MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b);
}  // namespace symbols

/// Smooth step S(r) on [0,1]: 0 for r <= 0, 1 for r >= 1, C^infinity.
double smooth_step(double r);
/// phi(|k|/a) with phi = 1 - S(|k|/a - 1).
double cutoff_profile(double k, double a);

/// m evaluated on the grid's wavenumbers in FFT order, zero mode explicit.
/// Throws NumericError if any value is non-finite.
std::vector<cplx> symbol_table(const Grid& g, const MultiplierSymbol& m);

/// Applies m spectrally. Requires a Hermitian symbol; the real part is returned.
Field apply_multiplier(const Field& f, const MultiplierSymbol& m);
ComplexField apply_multiplier_complex(const Field& f, const MultiplierSymbol& m);
void apply_in_place(Spectrum& s, const MultiplierSymbol& m);

}  // namespace fkdv
