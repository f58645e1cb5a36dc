#pragma once

#include "fkdv/grid.hpp"

namespace fkdv {

// u_hat_m = dx * sum_j u_j exp(-i k_m x_j),  u_j = (1/L) sum_m u_hat_m exp(i k_m x_j).
// With x_j = -L/2 + j dx and n even this is dx * (-1)^m times the plain DFT.

Spectrum forward(const Field& f);
Spectrum forward(const ComplexField& f);

/// Full complex inverse.
ComplexField inverse_complex(const Spectrum& s);
/// Real part of the inverse. For a Hermitian spectrum this is the whole
/// answer; the Nyquist slot contributes through its real part only.
Field inverse(const Spectrum& s);

/// sum_j |u_j|^2 dx, via the grid-native rectangle rule.
double l2_norm_sq(const Field& f);
double l2_norm(const Field& f);
/// (1/L) sum_m |u_hat_m|^2.
double spectral_l2_norm_sq(const Spectrum& s);

}  // namespace fkdv
