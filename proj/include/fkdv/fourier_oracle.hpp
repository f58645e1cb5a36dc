#pragma once

#include <functional>

#include "fkdv/grid.hpp"

namespace fkdv {

/// Transform on xi >= 0 of a real function u on the line, u_hat(-xi) = conj(u_hat(xi)).
using HalfSpectrum = std::function<cplx(double xi)>;

struct OracleOptions {
  /// u_hat is treated as zero beyond this.
  double xi_max = 12.0;
  /// Upper bound on |d/dxi arg u_hat|, used to size the panels.
  double phase_rate = 0.0;
  int min_panels = 64;
};

/// u(x) = (1/pi) Re int_0^inf u_hat(xi) e^{i x xi} dxi on the real line.
/// The substitution xi = s^2 absorbs |xi|^a-type behaviour at the origin.
double inverse_on_line(const HalfSpectrum& u_hat, double x, const OracleOptions& opt = {});

}  // namespace fkdv
