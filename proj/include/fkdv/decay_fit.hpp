#pragma once

#include <limits>
#include <string>
#include <vector>

#include "fkdv/grid.hpp"

namespace fkdv {

/// RMS log residual above which a power-law fit is rejected.
inline constexpr double kDecayResidualMax = 0.05;
/// Fits stay inside |x| <= 0.35 L to keep clear of wrap-around.
inline constexpr double kDecayWindowFraction = 0.35;

struct DecayFit {
  std::vector<double> radii;
  /// Phi(R) = int_{|x|>R} |u|^2 over the available domain.
  std::vector<double> tail_mass;
  /// Pointwise exponent p in |u| ~ |x|^-p; infinity when super_algebraic.
  double fitted_p = std::numeric_limits<double>::quiet_NaN();
  double r_critical = std::numeric_limits<double>::quiet_NaN();
  double r_lo = 0.0, r_hi = 0.0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool accepted = false;
  bool super_algebraic = false;
  std::string note;
};

/// Tail-mass fit of a box field over log-spaced radii in [r_lo, r_hi].
/// The model C (R^{1-2p} - E^{1-2p}) accounts for the box edge E = L/2.
DecayFit decay_fit(const Field& f, double r_lo, double r_hi, int n_radii);

/// Same fit on precomputed tail masses; `edge` may be +infinity.
DecayFit decay_fit_profile(std::vector<double> radii, std::vector<double> tail_mass, double edge,
                           double total_mass);

}  // namespace fkdv
