#include "fkdv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "fkdv/decay_fit.hpp"
#include "fkdv/diagnostics.hpp"
#include "fkdv/errors.hpp"
#include "fkdv/fourier_oracle.hpp"
#include "fkdv/io.hpp"
#include "fkdv/operators.hpp"
#include "fkdv/picard.hpp"
#include "fkdv/transform.hpp"

namespace fkdv {

Metric within(std::string name, double measured, double expected, double tolerance) {
  Metric m{std::move(name), measured, expected, tolerance, Rule::within, false};
  m.pass = std::isfinite(measured) && std::abs(measured - expected) <= tolerance;
  return m;
}

Metric at_most(std::string name, double measured, double bound) {
  Metric m{std::move(name), measured, bound, 0.0, Rule::at_most, false};
  m.pass = std::isfinite(measured) && measured <= bound;
  return m;
}

Metric at_least(std::string name, double measured, double bound) {
  Metric m{std::move(name), measured, bound, 0.0, Rule::at_least, false};
  m.pass = std::isfinite(measured) && measured >= bound;
  return m;
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::within: return "within";
    case Rule::at_most: return "at_most";
    case Rule::at_least: return "at_least";
  }
  return "?";
}

bool ExperimentReport::passed() const {
  return !metrics.empty() && std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass; });
}

const Metric& ExperimentReport::metric(const std::string& key) const {
  for (const auto& m : metrics)
    if (m.name == key) return m;
  throw ConfigError("report " + name + " has no metric '" + key + "'");
}

namespace {

constexpr double kPi = std::numbers::pi;

SimConfig scaled_box(const SimConfig& cfg, int factor) {
  SimConfig c = cfg;
  c.length = cfg.length * factor;
  c.n = cfg.n * factor;
  return c;
}

Field initial_field(const SimConfig& cfg) { return make_initial(make_grid(cfg.n, cfg.length), cfg.ic); }

double l2sq(const Field& f) { return l2_norm_sq(f); }

void require_zero_mean(const Field& u0, const std::string& who) {
  const double scale = std::sqrt(u0.grid->length()) * l2_norm(u0);
  if (std::abs(mean_value(u0)) > kMeanTol * scale)
    throw ConfigError(who + ": requires zero-mean data (int u0 = 0); project the initial condition");
}

void require_alpha_open(const SimConfig& cfg, const std::string& who) {
  if (!(cfg.alpha > -1.0 && cfg.alpha < 1.0))
    throw ConfigError(who + ": requires alpha in (-1, 1), got " + format_double(cfg.alpha));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct MomentTrace {
  std::vector<double> t, m;
  double m0 = 0.0, l2 = 0.0;
  bool truncated = false;
};

MomentTrace trace_moment(const SimConfig& c) {
  const Field u0 = initial_field(c);
  require_zero_mean(u0, "moment law");
  MomentTrace tr;
  tr.m0 = moment_low_modes(u0, c.alpha);
  tr.l2 = l2sq(u0);
  auto res = solve_from(c, u0, [&](double t, const Field& u) {
    tr.t.push_back(t);
    tr.m.push_back(moment_low_modes(u, c.alpha));
  });
  tr.truncated = res.truncated;
  return tr;
}

double max_moment_dev(const MomentTrace& tr) {
  if (tr.l2 == 0.0) return 0.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    dev = std::max(dev, std::abs(tr.m[i] - tr.m0 - 0.5 * tr.t[i] * tr.l2) / tr.l2);
  return dev;
}

}  // namespace

ExperimentReport run_moment_law(const SimConfig& cfg) {
  validate(cfg);
  require_alpha_open(cfg, "moment-law");
  ExperimentReport rep{"moment-law", cfg, {}, {}};
  SimConfig c = cfg;
  c.tail_tol = std::max(cfg.tail_tol, kLowModeTailTol);

  const MomentTrace a = trace_moment(scaled_box(c, 1));
  const MomentTrace b = trace_moment(scaled_box(c, 2));
  if (a.truncated || b.truncated) rep.notes.push_back("run truncated by tail contamination before t_final");

  const double dev_l = max_moment_dev(a), dev_2l = max_moment_dev(b);
  rep.notes.push_back("moment0 = " + fmt(b.m0) + ", ||u0||^2 = " + fmt(b.l2));
  rep.notes.push_back("max relative deviation at L: " + fmt(dev_l) + ", at 2L: " + fmt(dev_2l));
  rep.metrics.push_back(at_most("moment_deviation", dev_2l, 1e-5));

  // int D^alpha u vanishes by construction of the zero-mode convention, so
  // this only confirms the pipeline keeps the mean at zero.
  double da = 0.0;
  {
    const Field u0 = initial_field(c);
    auto tr = solve_from(c, u0, [&](double, const Field& u) {
      da = std::max(da, std::abs(mean_value(frac_deriv(u, c.alpha))));
    });
    (void)tr;
  }
  rep.metrics.push_back(at_most("int_D_alpha_u", da, 1e-12));
  rep.notes.push_back("int D^alpha u = 0 holds identically on the grid; the check is vacuous beyond mean control");
  return rep;
}

TStarReport run_tstar(const SimConfig& cfg) {
  validate(cfg);
  require_alpha_open(cfg, "tstar");
  TStarReport out;
  out.report = ExperimentReport{"tstar", cfg, {}, {}};
  const Field u0 = initial_field(cfg);
  require_zero_mean(u0, "tstar");
  out.moment0 = moment_low_modes(u0, cfg.alpha);
  out.l2sq = l2sq(u0);
  if (out.l2sq == 0.0) throw ConfigError("tstar: u0 vanishes identically");
  out.t_star_predicted = -4.0 * out.moment0 / out.l2sq;
  if (!(out.t_star_predicted > 0.0))
    throw ConfigError("tstar: t* = " + format_double(out.t_star_predicted) +
                      " is not positive; requires int x u0 < 0");
  if (out.t_star_predicted > cfg.t_final * (1.0 + 1e-12))
    throw ConfigError("tstar: t* = " + format_double(out.t_star_predicted) + " exceeds the horizon t_final = " +
                      format_double(cfg.t_final) + "; rerun with t_final >= t*");

  SimConfig c = scaled_box(cfg, 2);
  c.tail_tol = std::max(cfg.tail_tol, kLowModeTailTol);
  c.t_final = out.t_star_predicted;
  const MomentTrace tr = trace_moment(c);
  if (tr.truncated) out.report.notes.push_back("run truncated by tail contamination before t*");

  double integral = 0.0;
  for (std::size_t i = 1; i < tr.t.size(); ++i) integral += 0.5 * (tr.t[i] - tr.t[i - 1]) * (tr.m[i] + tr.m[i - 1]);
  for (std::size_t i = 1; i < tr.t.size(); ++i) {
    if ((tr.m[i - 1] < 0.0) != (tr.m[i] < 0.0) || tr.m[i] == 0.0) {
      const double w = tr.m[i - 1] / (tr.m[i - 1] - tr.m[i]);
      out.zero_crossing = tr.t[i - 1] + w * (tr.t[i] - tr.t[i - 1]);
      break;
    }
  }
  out.integral_of_moment = integral;
  out.residual = std::abs(integral) / (std::abs(out.moment0) * out.t_star_predicted);

  auto& rep = out.report;
  rep.notes.push_back("t* = " + fmt(out.t_star_predicted) + ", int_0^t* moment = " + fmt(integral));
  rep.metrics.push_back(at_most("tstar_residual", out.residual, 1e-4));
  rep.metrics.push_back(within("zero_crossing", out.zero_crossing, 0.5 * out.t_star_predicted, 1e-3));
  return out;
}

namespace {

struct JumpTrace {
  std::vector<double> t;
  std::vector<cplx> m;
  double l2 = 0.0;
};

JumpTrace trace_jump(const SimConfig& c) {
  const Field u0 = initial_field(c);
  JumpTrace tr;
  tr.l2 = l2sq(u0);
  solve_from(c, u0, [&](double t, const Field& u) {
    tr.t.push_back(t);
    tr.m.push_back(spectral_jump(u, true).m_plus);
  });
  return tr;
}

// The refined one-sided quotient carries an O(k1^2) bias.
JumpTrace richardson(const JumpTrace& a, const JumpTrace& b) {
  if (a.t.size() != b.t.size()) throw NumericError("two-time-bh: row mismatch between box sizes");
  JumpTrace r = b;
  for (std::size_t i = 0; i < r.m.size(); ++i) r.m[i] = (4.0 * b.m[i] - a.m[i]) / 3.0;
  return r;
}

// int x u from the one-sided quotient: i m_plus for real data
double moment_from_jump(cplx m_plus) { return -m_plus.imag(); }

}  // namespace

ExperimentReport run_two_time_bh(const SimConfig& cfg, double t1, double t2) {
  validate(cfg);
  if (cfg.alpha != -1.0) throw ConfigError("two-time-bh: requires alpha = -1");
  if (!(t1 > 0.0 && t2 > t1)) throw ConfigError("two-time-bh: requires 0 < t1 < t2");
  ExperimentReport rep{"two-time-bh", cfg, {}, {}};
  require_zero_mean(initial_field(cfg), "two-time-bh");

  SimConfig c = cfg;
  c.tail_tol = std::max(cfg.tail_tol, kLowModeTailTol);
  const double step_rows = c.dt * c.diag_every;

  // rows must land on t1 and t2: run each endpoint separately
  auto at_time = [&](double t) {
    SimConfig ct = c;
    ct.t_final = t;
    ct.diag_every = std::max(1, int(std::lround(t / c.dt)));
    const JumpTrace a = trace_jump(scaled_box(ct, 1));
    const JumpTrace b = trace_jump(scaled_box(ct, 2));
    return richardson(a, b);
  };

  SimConfig cl = c;
  cl.t_final = t2;
  const JumpTrace path = richardson(trace_jump(scaled_box(cl, 1)), trace_jump(scaled_box(cl, 2)));
  const cplx m0 = path.m.front();
  const double l2 = path.l2;
  auto law = [&](double t) {
    const cplx e = std::exp(cplx(0.0, t));
    return e * m0 - 0.5 * l2 * (e - 1.0);
  };
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < path.t.size(); ++i) {
    err = std::max(err, std::abs(path.m[i] - law(path.t[i])));
    scale = std::max(scale, std::abs(law(path.t[i])));
  }
  rep.notes.push_back("jump rows every " + fmt(step_rows) + " up to t2 = " + fmt(t2));
  rep.metrics.push_back(at_most("jump_law_relative_error", scale > 0.0 ? err / scale : 0.0, 1e-3));

  // linear flow: pure rotation
  {
    SimConfig lin = cl;
    lin.nonlinear = false;
    const JumpTrace tr = trace_jump(lin);
    double rot = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i)
      rot = std::max(rot, std::abs(tr.m[i] - std::exp(cplx(0.0, tr.t[i])) * tr.m.front()));
    const double s = std::abs(tr.m.front());
    rep.metrics.push_back(at_most("linear_rotation", s > 0.0 ? rot / s : 0.0, 1e-6));
  }

  // two-time identity: 2 sin(t2 - t1) int x u(t1) = (cos(t2 - t1) - 1) ||u0||^2
  // holds when the jump vanishes at both times; report R from measured and
  // predicted moments
  const JumpTrace e1 = at_time(t1);
  const double x1 = moment_from_jump(e1.m.back());
  const double x1_pred = moment_from_jump(law(t1));
  const double d = t2 - t1;
  const double r_meas = 2.0 * std::sin(d) * x1 - (std::cos(d) - 1.0) * l2;
  const double r_pred = 2.0 * std::sin(d) * x1_pred - (std::cos(d) - 1.0) * l2;
  rep.notes.push_back("R measured " + fmt(r_meas) + ", predicted " + fmt(r_pred));
  rep.metrics.push_back(within("identity_residual", r_meas, r_pred, 1e-3 * std::max(std::abs(r_pred), l2)));
  return rep;
}

namespace {

double simpson_log(const std::vector<double>& x, const std::vector<double>& f, std::size_t i0, std::size_t i1) {
  // composite Simpson in s = ln x on nodes i0..i1 (even count of intervals)
  double acc = 0.0;
  for (std::size_t i = i0; i + 2 <= i1; i += 2) {
    const double h = std::log(x[i + 1]) - std::log(x[i]);
    acc += h / 3.0 * (f[i] * x[i] + 4.0 * f[i + 1] * x[i + 1] + f[i + 2] * x[i + 2]);
  }
  return acc;
}

}  // namespace

ExperimentReport run_decay_threshold(const SimConfig& cfg, const std::vector<double>& r_probe,
                                     const std::vector<double>& l_list) {
  validate(cfg);
  ExperimentReport rep{"decay-threshold", cfg, {}, {}};
  const double alpha = cfg.alpha;
  const double t = cfg.t_final;

  if (cfg.ic.family == IcFamily::gaussian && !cfg.ic.zero_mean_projected) {
    const double a = cfg.ic.amplitude, s = cfg.ic.sigma, x0 = cfg.ic.x0;
    const HalfSpectrum uh = [=](double xi) {
      const double w = xi * std::pow(xi, alpha);
      return a * s * std::sqrt(kPi) * std::exp(-s * s * xi * xi / 4.0) * std::exp(cplx(0.0, t * w - xi * x0));
    };
    OracleOptions opt;
    opt.xi_max = 14.0 / s;
    opt.phase_rate = std::abs(x0) + t * (1.0 + alpha) * std::max(1.0, std::pow(opt.xi_max, alpha));
    const double r_lo = 20.0, r_hi = 80.0, x_max = 400.0;
    const int nodes = 960;  // even interval count
    std::vector<double> x(nodes + 1), f(nodes + 1);
    for (int i = 0; i <= nodes; ++i) x[i] = r_lo * std::pow(x_max / r_lo, double(i) / nodes);
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i <= nodes; ++i) {
      const double up = inverse_on_line(uh, x0 + x[i], opt);
      const double um = inverse_on_line(uh, x0 - x[i], opt);
      f[i] = up * up + um * um;
    }
    std::vector<double> radii, mass;
    for (int i = 0; i < nodes && x[i] <= r_hi * (1.0 + 1e-12); i += 16) {
      radii.push_back(x[i]);
      mass.push_back(simpson_log(x, f, i, nodes));
    }
    const double total = a * a * s * std::sqrt(kPi / 2.0);
    const DecayFit fit = decay_fit_profile(radii, mass, x_max, total);
    rep.notes.push_back("oracle tail fit on [" + fmt(r_lo) + ", " + fmt(r_hi) + "]: p = " + fmt(fit.fitted_p) +
                        ", residual " + fmt(fit.residual) + (fit.note.empty() ? "" : ", " + fit.note));
    const double tol = alpha == -1.0 ? 0.05 : 0.15;
    const double p = fit.accepted ? fit.fitted_p : std::numeric_limits<double>::quiet_NaN();
    rep.metrics.push_back(within("tail_exponent", p, 2.0 + alpha, tol));
  } else {
    rep.notes.push_back("oracle exponent skipped: needs unprojected gaussian data");
  }

  if (!r_probe.empty()) {
    if (l_list.size() < 3) throw ConfigError("decay-threshold: l_list needs at least three box sizes");
    std::vector<std::vector<double>> norms(r_probe.size());
    for (double len : l_list) {
      SimConfig c = cfg;
      const double ratio = len / cfg.length;
      c.n = int(std::lround(cfg.n * ratio));
      if (c.n % 2 != 0 || std::abs(c.n - cfg.n * ratio) > 1e-9)
        throw ConfigError("decay-threshold: box " + fmt(len) + " does not scale n to an even integer");
      c.length = len;
      c.tail_tol = 1.0;  // the box tail is what is being measured
      const Trajectory tr = solve(c);
      for (std::size_t k = 0; k < r_probe.size(); ++k) norms[k].push_back(weighted_norm(tr.final_state, r_probe[k]));
    }
    const Field u0 = initial_field(cfg);
    const bool zero_mean = std::abs(mean_value(u0)) <= kMeanTol * std::sqrt(cfg.length) * l2_norm(u0);
    const double r_crit = (zero_mean ? 2.5 : 1.5) + alpha;
    for (std::size_t k = 0; k < r_probe.size(); ++k) {
      const auto& w = norms[k];
      const std::size_t m = w.size();
      const double inc1 = w[m - 2] / w[m - 3] - 1.0, inc2 = w[m - 1] / w[m - 2] - 1.0;
      const std::string tag = "r=" + fmt(r_probe[k]);
      rep.notes.push_back("weighted norm " + tag + ": increments " + fmt(inc1) + ", " + fmt(inc2));
      if (r_probe[k] >= r_crit - 1e-12) {
        rep.metrics.push_back(at_least("growth_" + tag, std::min(inc1, inc2), 0.005));
        rep.metrics.push_back(at_least("growth_persistence_" + tag, inc1 > 0.0 ? inc2 / inc1 : 0.0, 0.5));
      } else {
        rep.metrics.push_back(at_most("convergence_" + tag, std::abs(inc2), 0.02));
      }
    }
  }
  return rep;
}

namespace {

double max_abs(const std::vector<double>& v, const Field& f, double radius) {
  double m = 0.0;
  for (int j = 0; j < f.size(); ++j)
    if (std::abs(f.grid->node(j)) <= radius) m = std::max(m, std::abs(v[j]));
  return m;
}

Field from_function(const GridPtr& g, auto fn) {
  Field f(g);
  for (int j = 0; j < g->n(); ++j) f[j] = fn(g->node(j));
  return f;
}

}  // namespace

ExperimentReport run_symmetry_checks(const SimConfig& cfg, double lambda) {
  validate(cfg);
  if (!(lambda > 0.0)) throw ConfigError("symmetry: lambda must be positive");
  ExperimentReport rep{"symmetry", cfg, {}, {}};
  const double alpha = cfg.alpha;
  const auto grid = make_grid(cfg.n, cfg.length);

  // (a) u_lambda(t, x) = lambda^alpha u(lambda^{1+alpha} t, lambda x)
  {
    const double sc = std::pow(lambda, 1.0 + alpha);
    SimConfig ca = cfg;
    ca.t_final = cfg.t_final * sc;
    SimConfig cb = cfg;
    cb.length = cfg.length / lambda;
    cb.dt = cfg.dt / sc;
    const Field ua0 = initial_field(ca);
    Field ub0(make_grid(cb.n, cb.length));
    for (int j = 0; j < cb.n; ++j) ub0[j] = std::pow(lambda, alpha) * ua0[j];
    const Field ua = solve_from(ca, ua0).final_state;
    const Field ub = solve_from(cb, ub0).final_state;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < cb.n; ++j) {
      num = std::max(num, std::abs(ub[j] - std::pow(lambda, alpha) * ua[j]));
      den = std::max(den, std::abs(ub[j]));
    }
    rep.metrics.push_back(at_most("scaling_residual", den > 0.0 ? num / den : num, 1e-6));
  }

  const double t = cfg.t_final;
  const double inner = cfg.length / 4.0;

  // (b) x u(t) = e^{tL}(x u0) - (1+alpha) t D^alpha u(t) on zero-mean data
  {
    const Field u0 = from_function(grid, [](double x) {
      const double x2 = x * x;
      return (16.0 * x2 * x2 - 48.0 * x2 + 12.0) * std::exp(-x2);
    });
    const Field ut = linear_propagator(u0, t, alpha);
    const Field lhs = coordinate_multiply(ut);
    const Field a = linear_propagator(coordinate_multiply(u0), t, alpha);
    const Field b = frac_deriv(ut, alpha);
    std::vector<double> r(grid->n());
    for (int j = 0; j < grid->n(); ++j) r[j] = lhs[j] - a[j] + (1.0 + alpha) * t * b[j];
    const double s = max_abs(lhs.samples, lhs, inner);
    rep.metrics.push_back(at_most("commuting_field", max_abs(r, lhs, inner) / s, 1e-8));
  }

  // (c) [x, d/dx D^alpha] f = -(1+alpha) D^alpha f
  {
    const Field f = from_function(grid, [](double x) {
      const double x2 = x * x;
      return (64.0 * x2 * x2 * x2 - 480.0 * x2 * x2 + 720.0 * x2 - 120.0) * std::exp(-x2);
    });
    const Field g = dispersion(f, alpha);
    const Field h = dispersion(coordinate_multiply(f), alpha);
    const Field d = frac_deriv(f, alpha);
    std::vector<double> r(grid->n()), ref(grid->n());
    for (int j = 0; j < grid->n(); ++j) {
      r[j] = grid->node(j) * g[j] - h[j] + (1.0 + alpha) * d[j];
      ref[j] = (1.0 + alpha) * d[j];
    }
    const double s = max_abs(ref, f, inner);
    rep.metrics.push_back(at_most("commutator_grid", s > 0.0 ? max_abs(r, f, inner) / s : 0.0, 1e-8));
  }
  if (alpha > -1.0) {
    // same identity on the line for f = x e^{-x^2}
    const double c = std::sqrt(kPi) / 2.0;
    const HalfSpectrum fh = [=](double xi) { return cplx(0.0, -c * xi * std::exp(-xi * xi / 4.0)); };
    const HalfSpectrum gh = [=](double xi) { return cplx(0.0, xi * std::pow(xi, alpha)) * fh(xi); };
    const HalfSpectrum hh = [=](double xi) {
      return cplx(0.0, xi * std::pow(xi, alpha)) * c * (1.0 - xi * xi / 2.0) * std::exp(-xi * xi / 4.0);
    };
    const HalfSpectrum dh = [=](double xi) { return std::pow(xi, alpha) * fh(xi); };
    OracleOptions opt;
    opt.xi_max = 14.0;
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= 64; ++i) {
      const double x = -8.0 + 0.25 * i;
      const double d = (1.0 + alpha) * inverse_on_line(dh, x, opt);
      num = std::max(num, std::abs(x * inverse_on_line(gh, x, opt) - inverse_on_line(hh, x, opt) + d));
      den = std::max(den, std::abs(d));
    }
    rep.metrics.push_back(at_most("commutator_line", num / den, 1e-8));
  }

  // (d) d/dx D^alpha = -H D^{1+alpha}
  {
    const Field f = initial_field(cfg);
    const Field lhs = dispersion(f, alpha);
    const Field rhs = hilbert(frac_deriv(f, 1.0 + alpha));
    std::vector<double> r(grid->n());
    double s = 0.0;
    for (int j = 0; j < grid->n(); ++j) {
      r[j] = lhs[j] + rhs[j];
      s = std::max(s, std::abs(lhs[j]));
    }
    const double m = *std::max_element(r.begin(), r.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
    rep.metrics.push_back(at_most("hilbert_identity", s > 0.0 ? std::abs(m) / s : 0.0, 1e-8));
  }
  return rep;
}

namespace {

struct BreakTrace {
  double onset = std::numeric_limits<double>::quiet_NaN();
  double max_ratio = 0.0;
  bool contaminated_first = false;
  std::string stop;
};

BreakTrace trace_breaking(const SimConfig& c) {
  BreakTrace bt;
  const Field u0 = initial_field(c);
  double g0 = -1.0, t_prev = 0.0, r_prev = 1.0;
  try {
    auto tr = solve_from(c, u0, [&](double t, const Field& u) {
      const Field ux = derivative(u);
      double g = 0.0;
      for (double v : ux.samples) g = std::max(g, std::abs(v));
      if (g0 < 0.0) g0 = g;
      const double r = g0 > 0.0 ? g / g0 : 0.0;
      bt.max_ratio = std::max(bt.max_ratio, r);
      if (std::isnan(bt.onset) && r >= 10.0) {
        // linear interpolation in log ratio between rows
        const double w = (std::log(10.0) - std::log(r_prev)) / (std::log(r) - std::log(r_prev));
        bt.onset = t_prev + w * (t - t_prev);
      }
      t_prev = t;
      r_prev = r;
    });
    if (tr.truncated) {
      bt.stop = "tail contamination at t = " + fmt(tr.truncation_time);
      bt.contaminated_first = std::isnan(bt.onset);
    }
  } catch (const NumericError& e) {
    bt.stop = std::string("solver stopped: ") + e.what();
  } catch (const StepError& e) {
    bt.stop = std::string("solver stopped: ") + e.what();
  }
  return bt;
}

}  // namespace

ExperimentReport run_wave_breaking(const SimConfig& cfg) {
  validate(cfg);
  if (!(cfg.alpha >= -1.0 && cfg.alpha < -1.0 / 3.0))
    throw ConfigError("wave-breaking: requires alpha in [-1, -1/3)");
  ExperimentReport rep{"wave-breaking", cfg, {}, {}};

  SimConfig c = cfg;
  c.diag_every = std::max(1, cfg.diag_every / 10);
  const BreakTrace a = trace_breaking(c);
  SimConfig h = c;
  h.dt = c.dt / 2.0;
  h.diag_every = 2 * c.diag_every;
  const BreakTrace b = trace_breaking(h);
  SimConfig ctl = c;
  ctl.alpha = 0.5;
  const BreakTrace k = trace_breaking(ctl);

  for (const auto* bt : {&a, &b})
    if (!bt->stop.empty()) rep.notes.push_back(bt->stop);
  if (a.contaminated_first) rep.notes.push_back("inconclusive: tail contamination preceded any onset");
  rep.notes.push_back("onset " + fmt(a.onset) + " (dt), " + fmt(b.onset) + " (dt/2); control max ratio " +
                      fmt(k.max_ratio));
  rep.metrics.push_back(at_least("onset_detected", std::isnan(a.onset) ? 0.0 : 1.0, 1.0));
  rep.metrics.push_back(at_most("onset_shift", std::abs(a.onset - b.onset) / a.onset, 0.05));
  rep.metrics.push_back(at_most("control_gradient_ratio", k.max_ratio, 10.0));
  return rep;
}

ExperimentReport run_conservation(const SimConfig& cfg) {
  validate(cfg);
  ExperimentReport rep{"conservation", cfg, {}, {}};
  const Field u0 = initial_field(cfg);
  const Invariants inv0 = invariants(u0, cfg.alpha);
  const Trajectory tr = solve_from(cfg, u0);
  if (tr.truncated) rep.notes.push_back("run truncated at t = " + fmt(tr.truncation_time));
  double d1 = 0.0, d2 = 0.0;
  for (const auto& r : tr.diagnostics) {
    d1 = std::max(d1, std::abs(r.i1 - inv0.i1));
    d2 = std::max(d2, std::abs(r.i2 - inv0.i2));
  }
  const double s1 = std::sqrt(cfg.length * inv0.i2);
  rep.metrics.push_back(at_most("i1_drift", s1 > 0.0 ? d1 / s1 : d1, 1e-12));
  rep.metrics.push_back(at_most("i2_drift", inv0.i2 > 0.0 ? d2 / inv0.i2 : d2, 1e-8));

  if (!inv0.i3) {
    rep.notes.push_back("I3 undefined: " + inv0.i3_note);
    return rep;
  }
  // drift order at steps coarse enough to sit above round-off
  const double dt_a = std::min(0.02, 0.8 * cfl_limit(u0));
  auto drift3 = [&](double dt) {
    SimConfig c = cfg;
    c.dt = dt;
    c.diag_every = 1 << 30;
    const Field uf = solve_from(c, u0).final_state;
    return std::abs(*invariants(uf, cfg.alpha).i3 - *inv0.i3);
  };
  const double ea = drift3(dt_a), eb = drift3(dt_a / 2.0);
  rep.notes.push_back("I3 drift " + fmt(ea) + " at dt " + fmt(dt_a) + ", " + fmt(eb) + " at dt/2");
  rep.metrics.push_back(at_least("i3_drift_ratio", eb > 0.0 ? ea / eb : 0.0, 8.0));
  return rep;
}

ExperimentReport run_convergence(const SimConfig& cfg) {
  validate(cfg);
  ExperimentReport rep{"convergence", cfg, {}, {}};
  const Field u0 = initial_field(cfg);

  auto final_at = [&](double dt, double t) {
    SimConfig c = cfg;
    c.dt = dt;
    c.t_final = t;
    c.diag_every = 1 << 30;
    return solve_from(c, u0).final_state;
  };
  auto dist = [](const Field& p, const Field& q) {
    double s = 0.0;
    for (int j = 0; j < p.size(); ++j) s += (p[j] - q[j]) * (p[j] - q[j]);
    return std::sqrt(s * p.grid->dx());
  };

  const double dt_a = std::min(0.02, 0.8 * cfl_limit(u0));
  const Field ref = final_at(dt_a / 8.0, cfg.t_final);
  const double e1 = dist(final_at(dt_a, cfg.t_final), ref);
  const double e2 = dist(final_at(dt_a / 2.0, cfg.t_final), ref);
  // the reference carries (1/8)^4 of the coarse error
  const double order = std::log2(e1 / e2);
  rep.notes.push_back("errors " + fmt(e1) + ", " + fmt(e2) + " at dt " + fmt(dt_a) + ", dt/2");
  rep.metrics.push_back(within("richardson_order", order, 4.0, 0.2));

  const double tp = 0.05;
  const Field pic = picard_oracle(u0, cfg, tp, 6);
  const Field num = final_at(cfg.dt, tp);
  const double nrm = l2_norm(pic);
  rep.metrics.push_back(at_most("picard_agreement", nrm > 0.0 ? dist(pic, num) / nrm : 0.0, 1e-6));

  auto render = [&]() {
    const Trajectory tr = solve(cfg);
    std::string s;
    for (const auto& r : tr.diagnostics)
      for (const auto& cell : diagnostics_row(r)) s += cell + ",";
    s.append(reinterpret_cast<const char*>(tr.final_state.samples.data()),
             tr.final_state.samples.size() * sizeof(double));
    return s;
  };
  rep.metrics.push_back(at_least("rerun_identical", render() == render() ? 1.0 : 0.0, 1.0));
  return rep;
}

std::vector<std::string> experiment_names() {
  return {"moment-law", "tstar", "two-time-bh", "decay-threshold", "symmetry", "wave-breaking", "conservation",
          "convergence"};
}

ExperimentReport run_named(const std::string& name, const SimConfig& cfg, const ExperimentParams& p) {
  if (name == "moment-law") return run_moment_law(cfg);
  if (name == "tstar") return run_tstar(cfg).report;
  if (name == "two-time-bh") return run_two_time_bh(cfg, p.t1, p.t2);
  if (name == "decay-threshold") return run_decay_threshold(cfg, p.r_probe, p.l_list);
  if (name == "symmetry") return run_symmetry_checks(cfg, p.lambda);
  if (name == "wave-breaking") return run_wave_breaking(cfg);
  if (name == "conservation") return run_conservation(cfg);
  if (name == "convergence") return run_convergence(cfg);
  throw ConfigError("unknown experiment '" + name + "'");
}

}  // namespace fkdv
