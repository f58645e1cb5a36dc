#pragma once

#include "fkdv/grid.hpp"

namespace fkdv {

/// Relative tolerance on |u_hat(0)| / (sqrt(L) ||f||_2) for negative orders.
inline constexpr double kMeanTol = 1e-10;

/// D^s f. For s < 0 the mean must vanish (DomainError otherwise).
Field frac_deriv(const Field& f, double s, double mean_tol = kMeanTol);
Field hilbert(const Field& f);
Field derivative(const Field& f);
/// J^s f, symbol <k>^s.
Field bessel(const Field& f, double s);
/// d/dx D^alpha f.
Field dispersion(const Field& f, double alpha);

struct CutoffSpec {
  double a = 1.0;
};

/// P^phi f. The cutoff must fit below the Nyquist wavenumber.
Field projector_low(const Field& f, const CutoffSpec& cutoff);

/// x_j f_j.
Field coordinate_multiply(const Field& f);

/// u_hat(0) = sum_j f_j dx.
double mean_value(const Field& f);

}  // namespace fkdv
