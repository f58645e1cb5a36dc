#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fkdv/grid.hpp"

namespace fkdv {

class TruncatedWeight;

enum class TargetKind { constant, power_cutoff, signed_power_cutoff, propagator, sign_propagator, weight, sampled };

/// How a target behaves for |xi| -> infinity.
enum class TailKind {
  /// Equal to fixed limits beyond `support_radius`.
  constant_limits,
  /// Unimodular with a monotone phase rate (bare propagator).
  oscillatory,
  /// Bounded by |amplitude| <xi>^-2 (bracketed, no cutoff).
  decaying,
};

struct SingularPoint {
  double location = 0.0;
  /// Local Hoelder exponent; |f(s) - f(s+z)| <= c |z|^gamma.
  double gamma = 0.0;
  double c = 0.0;
};

/// A function of the frequency variable, f(xi) = amplitude * g(dilation * xi) with
/// g = base * <z>^{-2} (if bracket) * phi_a(z) (if cutoff), optionally differentiated once.
struct SteinTarget {
  TargetKind kind = TargetKind::constant;
  double beta = 0.0;
  double alpha = 0.0;
  double t = 0.0;
  double theta = 0.0;
  double n_w = 1.0;
  bool bracket = false;
  std::optional<double> cutoff;
  double dilation = 1.0;
  cplx amplitude = 1.0;
  /// Evaluate d/dxi f by central differences instead of f.
  bool differentiated = false;
  /// sampled: uniform nodes x0 + i*h, clamped to the end values outside.
  std::vector<double> samples;
  double sample_x0 = 0.0;
  double sample_h = 1.0;

  static SteinTarget constant_one();
  /// |xi|^beta phi_1(xi)
  static SteinTarget power_cutoff(double beta);
  /// sign(xi) |xi|^beta phi_1(xi)
  static SteinTarget signed_power_cutoff(double beta);
  /// exp(i xi |xi|^alpha t)
  static SteinTarget propagator(double alpha, double t);
  /// exp(i t sign(xi))
  static SteinTarget sign_propagator(double t);
  /// truncated <xi>_N^theta
  static SteinTarget weight(double theta, double n_w);
  static SteinTarget sampled(std::vector<double> values, double x0, double h);

  SteinTarget with_bracket() const;
  SteinTarget with_cutoff(double a) const;
  SteinTarget dilated(double lambda) const;
  SteinTarget scaled(cplx a) const;
  SteinTarget derivative() const;

  std::string name() const;
};

/// Prepared evaluator; thread-safe for concurrent calls.
class TargetEval {
 public:
  explicit TargetEval(const SteinTarget& t);
  ~TargetEval();
  TargetEval(const TargetEval&) = delete;
  TargetEval& operator=(const TargetEval&) = delete;

  cplx operator()(double xi) const;
  const SteinTarget& spec() const { return spec_; }

  bool identically_constant() const;
  TailKind tail() const;
  /// constant_limits: f(xi) = limit_plus for xi >= R, limit_minus for xi <= -R.
  double support_radius() const;
  cplx limit_plus() const;
  cplx limit_minus() const;
  /// Bound on |f| for |xi| >= r (decaying tails).
  double decay_bound(double r) const;
  /// Phase rate |d/dxi arg f| at xi (oscillatory tails and panel sizing); 0 if none.
  double phase_rate(double xi) const;
  /// Phase of the bare propagator at xi, t lambda xi |lambda xi|^alpha.
  double phase(double xi) const;

  std::vector<SingularPoint> singular_points() const;
  /// Smooth features as (lo, hi, width): panels touching [lo, hi] get width <= `width`.
  struct Feature {
    double lo, hi, width;
  };
  const std::vector<Feature>& features() const { return features_; }
  /// Points where panels should break (feature edges, singular points).
  const std::vector<double>& breakpoints() const { return breaks_; }

 private:
  cplx raw(double xi) const;
  cplx shape(double z) const;

  SteinTarget spec_;
  std::unique_ptr<TruncatedWeight> weight_;
  struct Spline;
  std::unique_ptr<Spline> spline_;
  std::vector<Feature> features_;
  std::vector<double> breaks_;
};

}  // namespace fkdv
