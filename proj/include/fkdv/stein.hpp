#pragma once

#include <string>
#include <vector>

#include "fkdv/stein_target.hpp"

namespace fkdv {

struct SteinQuad {
  /// Inner split radius, relative to max(|eta|, 1/dilation). Shrunk further as needed.
  double delta = 1e-6;
  double y_max = 1e3;
  /// Minimum panel count on [delta, y_max].
  int n_panels = 2048;
};

struct SteinRequest {
  double b = 0.5;
  SteinTarget target;
  std::vector<double> eval_points;
  SteinQuad quad;
};

struct SteinResult {
  std::vector<double> values;
  /// Panel-refinement difference + inner Hoelder envelope + tail bound, in units of the value.
  std::vector<double> error_estimates;
  /// Largest bound on the part of the outer tail not integrated exactly (D^2 units).
  double tail_bound = 0.0;
  std::vector<std::string> warnings;
};

/// (int |f(eta)-f(y)|^2 |eta-y|^{-1-2b} dy)^{1/2} at each eval point.
SteinResult stein_derivative(const SteinRequest& req);

struct SteinSquare {
  double value = 0.0;
  double error = 0.0;
  double tail_bound = 0.0;
};
/// The squared integral at one point for a prepared target.
SteinSquare stein_square(const TargetEval& f, double b, double eta, const SteinQuad& quad = {});

enum class Regime { small_eta, large_eta };

inline constexpr double kSlopeResidualMax = 0.05;

struct SlopeFit {
  Regime regime = Regime::small_eta;
  double fitted_slope = 0.0;
  /// NaN when the target has no closed-form prediction.
  double expected_slope = 0.0;
  double residual = 0.0;
  bool accepted = false;
  bool log_correction_detected = false;
  /// log_test: slope of D^2 against -ln eta.
  double log_slope = 0.0;
  std::string method;
};

/// Log-log slope over the request's eval points (at least 6, positive).
SlopeFit stein_slope_fit(const SteinRequest& req, Regime regime);

struct PropagatorBound {
  double c = 0.0;
  double c_dense = 0.0;
  bool stable = false;
  bool log_branch_used = false;
};

/// |t|^{b/(1+a)} + |t|^b |x|^{b a} for a > 0, and the F form for a < 0.
double propagator_bound_form(double alpha, double b, double t, double x, bool* log_branch = nullptr);

/// max D^b(exp(i xi|xi|^alpha t))(x) / bound over the samples, and again on a doubled sample set.
PropagatorBound propagator_stein_bound(double alpha, double b, const std::vector<double>& t_list,
                                       const std::vector<double>& x_list, const SteinQuad& quad = {});

struct NonmembershipScan {
  double alpha = 0.0, t = 0.0, s_order = 0.0;
  std::string target;
  std::vector<double> eps;
  std::vector<double> q2;
  double fitted_c = 0.0;
  double c_over_t2 = 0.0;
  double intercept = 0.0;
  double relative_residual = 0.0;
  double last_increment_ratio = 0.0;
  bool divergent = false;
};

/// Q(eps)^2 = int_{eps<|eta|<1} (D^s target)^2 deta and its affine fit in ln(eps0/eps).
NonmembershipScan nonmembership_scan(double alpha, double t, double s_order, const std::vector<double>& eps_list);

}  // namespace fkdv
