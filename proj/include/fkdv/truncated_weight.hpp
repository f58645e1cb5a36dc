#pragma once

#include <cmath>
#include <vector>

#include "fkdv/grid.hpp"

namespace fkdv {

/// <x>_N^theta: equals (1+x^2)^{theta/2} on |x| <= N and (2N)^theta on |x| >= 3N.
///
/// On the bridge the slope of <x>^theta is faded out by a C^infinity cutoff,
///   w(x) = g(N) + int_N^x g'(y) psi(y) dy,  psi(y) = 1 - S((y - x0)/N),
/// and x0 in [N, 2N] is chosen so the plateau lands exactly on (2N)^theta.
/// Hence 0 <= w' <= g' <= 1 and w is smooth everywhere.
class TruncatedWeight {
 public:
  TruncatedWeight(double n_w, double theta);

  double n_w() const { return n_; }
  double theta() const { return theta_; }
  double plateau() const { return plateau_; }
  /// Start of the slope fade; the fade is complete at x0 + N.
  double fade_start() const { return x0_; }

  double operator()(double x) const;
  double derivative(double x) const;

 private:
  double bridge(double x, double x0) const;
  double n_;
  double theta_;
  double plateau_;
  double x0_;
};

/// Samples of <x_j>_N^theta; requires 3N < L/2.
std::vector<double> truncated_weight(const Grid& g, double n_w, double theta);

/// Untruncated <x>^theta.
inline double japanese(double x, double theta) { return std::pow(1.0 + x * x, 0.5 * theta); }

}  // namespace fkdv
