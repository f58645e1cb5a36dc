#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fkdv/grid.hpp"

namespace fkdv {

/// Outer region |x| >= kTailEdge * L counted by tail_fraction (outer 10% of the box).
inline constexpr double kTailEdge = 0.45;

struct Invariants {
  double i1 = 0.0;
  double i2 = 0.0;
  /// Absent for alpha < 0 when the mean does not vanish.
  std::optional<double> i3;
  std::string i3_note;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double i1 = 0.0, i2 = 0.0;
  std::optional<double> i3;
  double mean = 0.0;
  double moment_x = 0.0;
  double max_u = 0.0;
  double min_ux = 0.0;
  double max_abs_ux = 0.0;
  double tail_frac = 0.0;
  /// (r, ||<x>^r u||_2) in request order.
  std::vector<std::pair<double, double>> wnorms;
  std::optional<double> zsnorm;
  std::optional<cplx> jump;
  /// ||<x>^{1/2} H u||_2, tracked on request for alpha = -1.
  std::optional<double> hilbert_wnorm;
};

struct RecordOptions {
  std::vector<double> weight_orders;
  std::optional<double> sobolev_s;
  bool jump = false;
  bool hilbert_wnorm = false;
};

Invariants invariants(const Field& f, double alpha);

/// sum_j x_j f_j dx
double moment_first(const Field& f);

struct MomentEstimate {
  double value = 0.0;
  bool reliable = true;
};
/// int x f from the lowest modes: least-squares fit of -Im u_hat(k)/k against
/// 1, k^{2(1+alpha)}, k^{2+alpha}, k^2, k^4. Insensitive to box-edge and
/// cutoff-scale content that pollutes the box quadrature of x f.
double moment_low_modes(const Field& f, double alpha, int modes = 8);

/// moment_first, flagged unreliable when the tail fraction exceeds tail_tol.
MomentEstimate moment_first_checked(const Field& f, double tail_tol = 1e-8);

/// sum_{|x_j| >= 0.45 L} f_j^2 / sum_j f_j^2; 0 for the zero field.
double tail_fraction(const Field& f);

struct WeightSpec {
  /// 0 selects the exact weight <x>; otherwise the truncated <x>_N.
  double truncation = 0.0;
  static WeightSpec exact() { return {}; }
  static WeightSpec truncated(double n) { return {n}; }
};

/// (sum_j w(x_j)^{2r} f_j^2 dx)^{1/2}. For the truncated weight, r must lie in (0,1].
double weighted_norm(const Field& f, double r, WeightSpec weight = WeightSpec::exact());
double sobolev_norm(const Field& f, double s);

/// ||J^{theta1 a}(<x>^{(1-theta1) b} f)|| / (||<x>^b f||^{1-theta1} ||J^a f||^{theta1}).
double interpolation_probe(const Field& f, double a, double b, double theta1);

struct JumpEstimate {
  cplx m_plus;
  cplx m_minus;
};
/// One-sided quotients u_hat(+-k1)/(+-k1); `refine` uses the 3-point one-sided rule.
JumpEstimate spectral_jump(const Field& f, bool refine = false);

DiagnosticsRecord make_record(double t, const Field& f, double alpha, const RecordOptions& opt);

}  // namespace fkdv
