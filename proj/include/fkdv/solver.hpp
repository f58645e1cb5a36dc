#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fkdv/diagnostics.hpp"
#include "fkdv/grid.hpp"
#include "fkdv/initial_condition.hpp"

namespace fkdv {

inline constexpr double kCflConstant = 0.5;

struct SimConfig {
  double alpha = 0.5;
  int n = 4096;
  double length = 200.0;
  double dt = 1e-3;
  double t_final = 1.0;
  bool dealias = true;
  int diag_every = 100;
  InitialCondition ic = InitialCondition::gaussian(0.2, 1.0, 0.0);
  double tail_tol = 1e-8;
  std::vector<double> weight_orders;
  /// Allows alpha up to 2 (Benjamin-Ono, KdV).
  bool extended = false;
  /// Off: pure linear flow u_t = d/dx D^alpha u.
  bool nonlinear = true;
  /// Keep a copy of the state at every diagnostics row.
  bool store_states = false;
  /// Track ||<x>^{1/2} H u|| in the diagnostics rows.
  bool hilbert_wnorm = false;
};

/// Throws ConfigError naming the offending key.
void validate(const SimConfig& cfg);

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<DiagnosticsRecord> diagnostics;
  Field final_state;
  long steps = 0;
  bool truncated = false;
  double truncation_time = 0.0;
  std::string notes;
};

/// Precomputed spectral tables for one (grid, alpha, dealias) triple.
class Integrator {
 public:
  Integrator(GridPtr grid, double alpha, bool dealias, bool nonlinear = true);

  const GridPtr& grid() const { return grid_; }
  double alpha() const { return alpha_; }

  /// -1/2 d/dx P((P u)^2) in spectral form.
  Spectrum nonlinear(const Spectrum& u_hat) const;
  /// u_hat * exp(i t omega), omega = k|k|^alpha.
  Spectrum propagate(const Spectrum& u_hat, double t) const;
  /// One integrating-factor RK4 step (no CFL check).
  Spectrum step(const Spectrum& u_hat, double dt) const;

  /// omega(k) on the grid; 0 at k = 0 and at the Nyquist slot.
  const std::vector<double>& omega() const { return omega_; }

 private:
  GridPtr grid_;
  double alpha_;
  bool nonlinear_;
  std::vector<double> omega_;
  std::vector<cplx> ik_;
  std::vector<double> mask_;
};

/// exp(t d/dx D^alpha) f; unitary, group property exact to round-off.
Field linear_propagator(const Field& f, double t, double alpha);
Field nonlinear_term(const Field& f, bool dealias);
/// One step with the CFL re-check; StepError carries the admissible dt.
Field step_ifrk4(const Field& f, double dt, const SimConfig& cfg);

/// dt_cfl = c dx / max(1, ||u||_inf)
double cfl_limit(const Field& f);

using Observer = std::function<void(double t, const Field& u)>;

Trajectory solve(const SimConfig& cfg);
/// Same, starting from an explicit state; `observer` sees every diagnostics row.
Trajectory solve_from(const SimConfig& cfg, const Field& u0, const Observer& observer = {});

}  // namespace fkdv
