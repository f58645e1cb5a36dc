#include "fkdv/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fkdv/errors.hpp"
#include "fkdv/kernels.hpp"
#include "fkdv/transform.hpp"

namespace fkdv {

namespace {
constexpr cplx I{0.0, 1.0};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace

void validate(const SimConfig& cfg) {
  const double hi = cfg.extended ? 2.0 : 1.0;
  if (cfg.alpha == 0.0) throw ConfigError("alpha must be nonzero");
  if (!(cfg.alpha >= -1.0 && (cfg.extended ? cfg.alpha <= hi : cfg.alpha < hi)))
    throw ConfigError("alpha must lie in [-1, 1) (or [-1, 2] with extended), got " + format_double(cfg.alpha));
  if (cfg.n < 8 || cfg.n % 2) throw ConfigError("n must be even and at least 8");
  if (!(cfg.length > 0.0)) throw ConfigError("length must be positive");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (cfg.diag_every < 1) throw ConfigError("diag_every must be a positive integer");
  if (!(cfg.tail_tol > 0.0 && cfg.tail_tol <= 1.0)) throw ConfigError("tail_tol must lie in (0, 1]");
  for (double r : cfg.weight_orders)
    if (!(r >= 0.0)) throw ConfigError("weight_orders entries must be non-negative");
}

Integrator::Integrator(GridPtr grid, double alpha, bool dealias, bool nonlinear)
    : grid_(std::move(grid)), alpha_(alpha), nonlinear_(nonlinear) {
  const int n = grid_->n();
  omega_.assign(n, 0.0);
  ik_.assign(n, cplx{});
  mask_.assign(n, 1.0);
  for (int i = 0; i < n; ++i) {
    const double k = grid_->wavenumber(i);
    // The unpaired Nyquist slot has no real-valued derivative; leave it inert.
    if (i == 0 || i == grid_->nyquist_index()) continue;
    omega_[i] = k * std::pow(std::abs(k), alpha_);
    ik_[i] = I * k;
    if (dealias && 3 * std::abs(grid_->mode(i)) >= n) mask_[i] = 0.0;
  }
  if (dealias) mask_[grid_->nyquist_index()] = 0.0;
}

Spectrum Integrator::nonlinear(const Spectrum& u_hat) const {
  Spectrum out(grid_);
  if (!nonlinear_) return out;
  Spectrum v = u_hat;
  kernels::multiply(v.coeffs, mask_);
  Field u = inverse(v);
  Field sq(grid_);
  kernels::square(u.samples, sq.samples);
  out = forward(sq);
  kernels::multiply(out.coeffs, mask_);
  kernels::multiply(out.coeffs, ik_);
  for (auto& c : out.coeffs) c *= -0.5;
  return out;
}

Spectrum Integrator::propagate(const Spectrum& u_hat, double t) const {
  Spectrum out = u_hat;
  std::vector<cplx> e(omega_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(I * (t * omega_[i]));
  kernels::multiply(out.coeffs, e);
  return out;
}

Spectrum Integrator::step(const Spectrum& u, double dt) const {
  const std::size_t n = u.coeffs.size();
  std::vector<cplx> eh(n), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    eh[i] = std::exp(I * (0.5 * dt * omega_[i]));
    e[i] = eh[i] * eh[i];
  }
  const Spectrum a = nonlinear(u);

  Spectrum tmp = u;
  kernels::axpy(0.5 * dt, a.coeffs, tmp.coeffs);
  kernels::multiply(tmp.coeffs, eh);
  const Spectrum b = nonlinear(tmp);

  Spectrum ehu = u;
  kernels::multiply(ehu.coeffs, eh);
  tmp = ehu;
  kernels::axpy(0.5 * dt, b.coeffs, tmp.coeffs);
  const Spectrum c = nonlinear(tmp);

  Spectrum eu = u;
  kernels::multiply(eu.coeffs, e);
  Spectrum ehc = c;
  kernels::multiply(ehc.coeffs, eh);
  tmp = eu;
  kernels::axpy(dt, ehc.coeffs, tmp.coeffs);
  const Spectrum d = nonlinear(tmp);

  // E u + dt/6 (E a + 2 Eh (b + c) + d)
  Spectrum ea = a;
  kernels::multiply(ea.coeffs, e);
  Spectrum bc = b;
  kernels::axpy(1.0, c.coeffs, bc.coeffs);
  kernels::multiply(bc.coeffs, eh);
  Spectrum out = eu;
  kernels::axpy(dt / 6.0, ea.coeffs, out.coeffs);
  kernels::axpy(dt / 3.0, bc.coeffs, out.coeffs);
  kernels::axpy(dt / 6.0, d.coeffs, out.coeffs);
  return out;
}

Field linear_propagator(const Field& f, double t, double alpha) {
  Integrator it(f.grid, alpha, false, false);
  return inverse(it.propagate(forward(f), t));
}

Field nonlinear_term(const Field& f, bool dealias) {
  if (!all_finite(f.samples)) throw NumericError("nonlinear term of a non-finite field");
  Integrator it(f.grid, 1.0, dealias, true);
  Field out = inverse(it.nonlinear(forward(f)));
  if (!all_finite(out.samples)) throw NumericError("nonlinear term overflowed");
  return out;
}

double cfl_limit(const Field& f) { return kCflConstant * f.grid->dx() / std::max(1.0, max_abs(f.samples)); }

Field step_ifrk4(const Field& f, double dt, const SimConfig& cfg) {
  if (!all_finite(f.samples)) throw NumericError("step from a non-finite state");
  const double lim = cfl_limit(f);
  if (dt > lim) throw StepError("dt=" + format_double(dt) + " exceeds the CFL limit", lim);
  Integrator it(f.grid, cfg.alpha, cfg.dealias, cfg.nonlinear);
  Field out = inverse(it.step(forward(f), dt));
  if (!all_finite(out.samples)) throw NumericError("step produced non-finite values", 0.0);
  return out;
}

Trajectory solve(const SimConfig& cfg) {
  validate(cfg);
  const GridPtr g = make_grid(cfg.n, cfg.length);
  return solve_from(cfg, make_initial(g, cfg.ic));
}

Trajectory solve_from(const SimConfig& cfg, const Field& u0, const Observer& observer) {
  validate(cfg);
  const GridPtr g = u0.grid;
  if (!all_finite(u0.samples)) throw NumericError("initial state is not finite");
  const double tail0 = tail_fraction(u0);
  if (tail0 > cfg.tail_tol)
    throw ConfigError("initial tail fraction " + format_double(tail0) + " exceeds tail_tol " +
                      format_double(cfg.tail_tol));

  RecordOptions opt;
  opt.weight_orders = cfg.weight_orders;
  opt.hilbert_wnorm = cfg.hilbert_wnorm;

  Integrator it(g, cfg.alpha, cfg.dealias, cfg.nonlinear);
  Trajectory traj;
  auto emit = [&](double t, const Field& u) {
    traj.times.push_back(t);
    traj.diagnostics.push_back(make_record(t, u, cfg.alpha, opt));
    if (cfg.store_states) traj.states.push_back(u);
    if (observer) observer(t, u);
  };

  Field u = u0;
  Spectrum uh = forward(u);
  emit(0.0, u);

  // Step count fixed up front so that t lands on t_final exactly.
  const long nsteps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  double t = 0.0;
  for (long s = 1; s <= nsteps; ++s) {
    const double t_next = s == nsteps ? cfg.t_final : s * cfg.dt;
    const double h = t_next - t;
    const double lim = cfl_limit(u);
    if (h > lim * (1.0 + 1e-12))
      throw StepError("dt=" + format_double(h) + " exceeds the CFL limit at t=" + format_double(t), lim);
    Spectrum next = it.step(uh, h);
    Field un = inverse(next);
    if (!all_finite(un.samples))
      throw NumericError("non-finite state at step " + std::to_string(s) + ", last good time " +
                             format_double(t),
                         t);
    uh = std::move(next);
    u = std::move(un);
    t = t_next;
    traj.steps = s;
    const double tail = tail_fraction(u);
    if (tail > cfg.tail_tol) {
      traj.truncated = true;
      traj.truncation_time = t;
      traj.notes = "truncated: tail fraction " + format_double(tail) + " exceeded tail_tol at t=" + format_double(t);
      emit(t, u);
      break;
    }
    if (s % cfg.diag_every == 0 || s == nsteps) emit(t, u);
  }
  traj.final_state = u;
  return traj;
}

}  // namespace fkdv
