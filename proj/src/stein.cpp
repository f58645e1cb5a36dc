#include "fkdv/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "fkdv/errors.hpp"

namespace fkdv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// envelope allowed relative to the integral before delta is shrunk further
constexpr double kEnvelopeRel = 1e-10;
constexpr int kGrading = 48;

using Rule = boost::math::quadrature::gauss<double, 8>;

template <class F>
double gl(const F& g, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * (g(mid - half * x[i]) + g(mid + half * x[i]));
  return s * half;
}

struct Local {
  double gamma = 1.0;
  double c = 0.0;
  double dist = kInf;  // to the nearest other singular point
};

Local local_hoelder(const TargetEval& f, double b, double eta) {
  Local loc;
  bool at_singular = false;
  for (const auto& s : f.singular_points()) {
    const double d = std::abs(eta - s.location);
    if (d == 0.0) {
      if (s.gamma <= b)
        throw EvaluationError("target " + f.spec().name() + " is only Hoelder-" + format_double(s.gamma) +
                              " at " + format_double(eta) + ", not above b = " + format_double(b));
      loc.gamma = s.gamma;
      loc.c = s.c;
      at_singular = true;
    } else {
      loc.dist = std::min(loc.dist, d);
    }
  }
  if (!at_singular) {
    const double lam = f.spec().dilation;
    const double h = std::min(0.1 * loc.dist, 1e-4 * (std::abs(eta) + 1.0 / lam));
    const double slope = std::abs(f(eta + h) - f(eta - h)) / (2.0 * h);
    const double curv = std::abs(f(eta + h) + f(eta - h) - 2.0 * f(eta)) / (h * h);
    loc.c = 2.0 * slope + curv * h;
  }
  return loc;
}

// panels in z = |y - eta| on [lo, hi]
std::vector<double> panel_edges(const TargetEval& f, double eta, double lo, double hi, int min_panels) {
  std::vector<double> e{lo, hi};
  for (double z = lo * 2.0; z < hi; z *= 2.0) e.push_back(z);
  std::vector<double> singular;
  for (const auto& s : f.singular_points()) singular.push_back(s.location);
  for (double bp : f.breakpoints()) {
    const double zb = std::abs(bp - eta);
    if (!(zb > lo && zb < hi)) continue;
    e.push_back(zb);
    if (std::find(singular.begin(), singular.end(), bp) == singular.end()) continue;
    double g = 0.5;
    for (int k = 0; k < kGrading; ++k, g *= 0.5) {
      if (zb * (1.0 - g) > lo) e.push_back(zb * (1.0 - g));
      if (zb * (1.0 + g) < hi) e.push_back(zb * (1.0 + g));
    }
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());

  const double alpha = f.spec().alpha;
  std::vector<double> out{e.front()};
  std::vector<int> counts(e.size() - 1, 1);
  long total = 0;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    const double z0 = e[i], z1 = e[i + 1], w = z1 - z0;
    int n = 1;
    for (const auto& ft : f.features()) {
      const bool hit_p = eta + z0 <= ft.hi && eta + z1 >= ft.lo;
      const bool hit_m = eta - z1 <= ft.hi && eta - z0 >= ft.lo;
      if (hit_p || hit_m) n = std::max(n, int(std::ceil(w / ft.width)));
    }
    for (double sgn : {1.0, -1.0}) {
      const double ya = eta + sgn * z0, yb = eta + sgn * z1;
      double turn;
      if (ya * yb < 0.0)
        turn = std::abs(f.phase(ya)) + std::abs(f.phase(yb));
      else
        turn = std::abs(f.phase(yb) - f.phase(ya));
      if (turn > 0.0) n = std::max(n, int(std::ceil(turn * (1.0 + std::abs(alpha)))));
    }
    counts[i] = n;
    total += n;
  }
  const int boost = total < min_panels ? int(std::ceil(double(min_panels) / double(total))) : 1;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    const int n = counts[i] * boost;
    for (int k = 1; k <= n; ++k) out.push_back(e[i] + (e[i + 1] - e[i]) * double(k) / n);
  }
  return out;
}

double value_units(double sq, double sq_err) {
  const double d = std::sqrt(std::max(sq, 0.0));
  return d > 0.0 ? std::min(sq_err / (2.0 * d), std::sqrt(sq_err)) : std::sqrt(sq_err);
}

}  // namespace

SteinSquare stein_square(const TargetEval& f, double b, double eta, const SteinQuad& quad) {
  if (!(b > 0.0 && b < 1.0)) throw ConfigError("Stein order b must lie in (0,1), got " + format_double(b));
  if (!std::isfinite(eta)) throw ConfigError("evaluation point must be finite");
  SteinSquare out;
  if (f.identically_constant()) return out;

  const Local loc = local_hoelder(f, b, eta);
  const double lam = f.spec().dilation;
  const double scale = std::max(std::abs(eta), 1.0 / lam);
  double delta = std::min(quad.delta * scale, 0.25 * loc.dist);

  const TailKind tail = f.tail();
  double r_out = std::max({quad.y_max, 10.0 * std::abs(eta), 2.0 * delta});
  if (tail == TailKind::constant_limits) r_out = std::max(r_out, std::abs(eta) + f.support_radius() + 1.0 / lam);

  const cplx fe = f(eta);
  const double expo = -1.0 - 2.0 * b;
  auto integrand = [&](double z) {
    const double a = std::norm(fe - f(eta + z)), c = std::norm(fe - f(eta - z));
    return (a + c) * std::pow(z, expo);
  };

  const auto edges = panel_edges(f, eta, delta, r_out, quad.n_panels);
  double sum = 0.0, diff = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], c = edges[i + 1], m = 0.5 * (a + c);
    const double coarse = gl(integrand, a, c);
    const double fine = gl(integrand, a, m) + gl(integrand, m, c);
    sum += fine;
    diff += std::abs(fine - coarse);
  }

  // inner disc: shrink delta dyadically until the Hoelder envelope is negligible
  const double ge = 2.0 * loc.gamma - 2.0 * b;
  auto envelope = [&](double d) { return 2.0 * loc.c * loc.c * std::pow(d, ge) / ge; };
  while (loc.c > 0.0 && envelope(delta) > kEnvelopeRel * std::max(sum, 1e-300) && delta > 1e-290) {
    const double a = 0.5 * delta, m = 0.75 * delta;
    const double coarse = gl(integrand, a, delta);
    const double fine = gl(integrand, a, m) + gl(integrand, m, delta);
    sum += fine;
    diff += std::abs(fine - coarse);
    delta = a;
  }
  const double env = loc.c > 0.0 ? envelope(delta) : 0.0;

  // outer tail beyond r_out
  const double tail_base = std::pow(r_out, -2.0 * b) / (2.0 * b);
  double tail_bound = 0.0;
  switch (tail) {
    case TailKind::constant_limits:
      sum += (std::norm(fe - f.limit_plus()) + std::norm(fe - f.limit_minus())) * tail_base;
      break;
    case TailKind::oscillatory: {
      const double amp = std::abs(f.spec().amplitude);
      sum += 2.0 * (std::norm(fe) + amp * amp) * tail_base;
      const double far = f.spec().alpha > 0.0 ? r_out - std::abs(eta) : r_out + std::abs(eta);
      const double rate = f.phase_rate(far);
      // integration by parts on each side: |int e^{i phi} z^{-1-2b}| <= 2 r^{-1-2b} / phi'
      tail_bound = rate > 0.0 ? 2.0 * 2.0 * std::abs(fe) * amp * 2.0 * std::pow(r_out, expo) / rate : kInf;
      break;
    }
    case TailKind::decaying: {
      sum += 2.0 * std::norm(fe) * tail_base;
      const double m = f.decay_bound(r_out - std::abs(eta));
      tail_bound = (2.0 * std::abs(fe) * m + m * m) * 2.0 * tail_base;
      break;
    }
  }
  out.value = sum;
  out.error = diff + env + tail_bound;
  out.tail_bound = tail_bound;
  return out;
}

SteinResult stein_derivative(const SteinRequest& req) {
  if (!(req.b > 0.0 && req.b < 1.0)) throw ConfigError("Stein order b must lie in (0,1), got " + format_double(req.b));
  if (!(req.quad.delta > 0.0) || !(req.quad.y_max > 0.0) || req.quad.n_panels < 1)
    throw ConfigError("Stein quadrature needs delta > 0, y_max > 0, n_panels >= 1");
  const TargetEval f(req.target);
  const std::size_t m = req.eval_points.size();
  SteinResult res;
  res.values.assign(m, 0.0);
  res.error_estimates.assign(m, 0.0);
  std::vector<double> tails(m, 0.0);
  std::vector<std::string> errors(m);

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < long(m); ++i) {
    try {
      const auto sq = stein_square(f, req.b, req.eval_points[i], req.quad);
      res.values[i] = std::sqrt(std::max(sq.value, 0.0));
      res.error_estimates[i] = value_units(sq.value, sq.error);
      tails[i] = sq.tail_bound;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!errors[i].empty()) throw EvaluationError(errors[i]);
    res.tail_bound = std::max(res.tail_bound, tails[i]);
    const double v = res.values[i], e = res.error_estimates[i];
    if (e > 1e-6 * std::max(v, 1e-300) && v > 0.0)
      res.warnings.push_back("eta=" + format_double(req.eval_points[i]) + ": error estimate " + format_double(e) +
                             " exceeds 1e-6 relative");
  }
  return res;
}

namespace {

struct Line {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
  }
  Line l;
  const double den = n * sxx - sx * sx;
  l.slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  l.intercept = (sy - l.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (l.intercept + l.slope * x[i]);
    ss += r * r;
  }
  l.rms = std::sqrt(ss / n);
  return l;
}

}  // namespace

SlopeFit stein_slope_fit(const SteinRequest& req, Regime regime) {
  if (req.eval_points.size() < 6) throw ConfigError("slope fit needs at least 6 eval points");
  for (double e : req.eval_points)
    if (!(e > 0.0)) throw ConfigError("slope fit eval points must be positive");
  const auto& tg = req.target;
  const double b = req.b;
  const bool pure_power = tg.kind == TargetKind::power_cutoff && !tg.bracket && !tg.cutoff && !tg.differentiated;
  const bool compact = TargetEval(tg).tail() == TailKind::constant_limits;

  SlopeFit fit;
  fit.regime = regime;
  fit.expected_slope = std::numeric_limits<double>::quiet_NaN();
  if (regime == Regime::large_eta && compact) fit.expected_slope = -0.5 - b;
  if (regime == Regime::small_eta && pure_power) fit.expected_slope = tg.beta - b;

  const auto res = stein_derivative(req);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < req.eval_points.size(); ++i) lx.push_back(std::log(req.eval_points[i]));

  if (regime == Regime::small_eta && pure_power && std::abs(tg.beta - b) < 1e-12) {
    // borderline: D^2 grows like -ln eta
    fit.method = "log_test";
    std::vector<double> nl, d2;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      nl.push_back(-lx[i]);
      d2.push_back(res.values[i] * res.values[i]);
      ly.push_back(std::log(res.values[i]));
    }
    const Line l = fit_line(nl, d2);
    const double spread = *std::max_element(d2.begin(), d2.end()) - *std::min_element(d2.begin(), d2.end());
    fit.log_slope = l.slope;
    fit.residual = spread > 0.0 ? l.rms / spread : kInf;
    fit.log_correction_detected = l.slope > 0.0 && fit.residual <= kSlopeResidualMax;
    fit.fitted_slope = fit_line(lx, ly).slope;
    fit.expected_slope = 0.0;
    fit.accepted = fit.log_correction_detected;
    return fit;
  }

  if (regime == Regime::small_eta && pure_power && tg.beta > b) {
    // D saturates at the finite value D(0)
    fit.method = "saturation";
    fit.expected_slope = 0.0;
  } else {
    fit.method = "log_log";
  }
  for (double v : res.values) ly.push_back(std::log(v));
  const Line l = fit_line(lx, ly);
  fit.fitted_slope = l.slope;
  fit.residual = l.rms;
  fit.accepted = std::isfinite(l.slope) && l.rms <= kSlopeResidualMax;
  return fit;
}

double propagator_bound_form(double alpha, double b, double t, double x, bool* log_branch) {
  if (log_branch) *log_branch = false;
  const double at = std::abs(t), ax = std::abs(x);
  if (alpha > 0.0) return std::pow(at, b / (1.0 + alpha)) + std::pow(at, b) * std::pow(ax, b * alpha);
  const double c0 = std::pow(at, b / (1.0 + alpha));
  const double e = 1.0 + alpha - b;
  if (std::abs(e) < 1e-12 && c0 * ax < std::exp(-1.0)) {
    if (log_branch) *log_branch = true;
    return c0 + c0 * std::sqrt(-std::log(c0 * ax));
  }
  return c0 + at * std::pow(ax, e);
}

namespace {

std::vector<double> densify(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(v[i]);
    if (i + 1 < v.size()) {
      const double a = v[i], c = v[i + 1];
      out.push_back(a * c > 0.0 ? std::copysign(std::sqrt(a * c), a) : 0.5 * (a + c));
    }
  }
  return out;
}

double max_ratio(double alpha, double b, const std::vector<double>& ts, const std::vector<double>& xs,
                 const SteinQuad& quad, bool& log_used) {
  double c = 0.0;
  for (double t : ts) {
    if (t == 0.0) continue;
    SteinRequest req;
    req.b = b;
    req.target = SteinTarget::propagator(alpha, t);
    req.eval_points = xs;
    req.quad = quad;
    const auto res = stein_derivative(req);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      bool lb = false;
      const double bound = propagator_bound_form(alpha, b, t, xs[i], &lb);
      log_used = log_used || lb;
      c = std::max(c, res.values[i] / bound);
    }
  }
  return c;
}

}  // namespace

PropagatorBound propagator_stein_bound(double alpha, double b, const std::vector<double>& t_list,
                                       const std::vector<double>& x_list, const SteinQuad& quad) {
  if (!(b > 0.0 && b < 1.0)) throw ConfigError("b must lie in (0,1)");
  if (!(alpha > -1.0 && alpha < 1.0) || alpha == 0.0) throw ConfigError("alpha must lie in (-1,1) without 0");
  if (t_list.empty() || x_list.empty()) throw ConfigError("propagator bound needs non-empty t and x samples");
  for (double x : x_list)
    if (x == 0.0 || !std::isfinite(x)) throw ConfigError("propagator bound samples need x != 0");
  PropagatorBound pb;
  pb.c = max_ratio(alpha, b, t_list, x_list, quad, pb.log_branch_used);
  pb.c_dense = max_ratio(alpha, b, densify(t_list), densify(x_list), quad, pb.log_branch_used);
  pb.stable = std::isfinite(pb.c) && std::isfinite(pb.c_dense) && pb.c_dense <= 2.0 * pb.c && pb.c <= 2.0 * pb.c_dense;
  return pb;
}

NonmembershipScan nonmembership_scan(double alpha, double t, double s_order, const std::vector<double>& eps_list) {
  if (eps_list.size() < 3) throw ConfigError("nonmembership scan needs at least 3 eps values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0)) throw ConfigError("eps values must lie in (0,1)");
    if (i && !(eps_list[i] < eps_list[i - 1])) throw ConfigError("eps values must be strictly decreasing");
  }
  if (!(t >= 0.0)) throw ConfigError("scan time must be non-negative");
  NonmembershipScan scan;
  scan.alpha = alpha, scan.t = t, scan.s_order = s_order, scan.eps = eps_list;

  SteinTarget target;
  if (std::abs(s_order - (1.5 + alpha)) < 1e-12) {
    if (alpha == -1.0)
      target = SteinTarget::sign_propagator(t).with_bracket().with_cutoff(1.0);
    else
      target = SteinTarget::propagator(alpha, t).with_bracket().with_cutoff(1.0);
  } else if (std::abs(s_order - (0.5 + alpha)) < 1e-12) {
    if (!(alpha > 0.0)) throw ConfigError("order 1/2+alpha scan needs alpha > 0");
    target = SteinTarget::power_cutoff(alpha).with_bracket().scaled((1.0 + alpha) * t);
  } else {
    throw ConfigError("s_order must be 3/2+alpha or 1/2+alpha, got " + format_double(s_order));
  }
  if (!(s_order > 0.0 && s_order < 2.0)) throw ConfigError("s_order must lie in (0,2)");
  scan.target = target.name();

  // order 1 is the plain derivative; above 1 the Stein order acts on the derivative
  const bool first = std::abs(s_order - 1.0) < 1e-12;
  const SteinTarget used = s_order > 1.0 && !first ? target.derivative() : target;
  const double b = s_order > 1.0 ? s_order - 1.0 : s_order;
  const TargetEval f(used);
  auto density = [&](double eta) {
    if (first) {
      const double h = 1e-5 * std::min(std::abs(eta), 1.0);
      return std::norm((f(eta + h) - f(eta - h)) / (2.0 * h));
    }
    return stein_square(f, b, eta).value;
  };

  // panels in u = ln|eta| no longer than 1/2, aligned with every ln eps
  std::vector<double> cuts{0.0};
  for (double e : eps_list) cuts.push_back(std::log(e));
  std::vector<double> edges{cuts[0]};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const int n = std::max(1, int(std::ceil((cuts[i - 1] - cuts[i]) / 0.5)));
    for (int k = 1; k <= n; ++k) edges.push_back(cuts[i - 1] + (cuts[i] - cuts[i - 1]) * double(k) / n);
  }
  const auto& gx = Rule::abscissa();
  const auto& gw = Rule::weights();
  const std::size_t np = edges.size() - 1;
  std::vector<double> panel(np, 0.0);
  std::vector<std::string> errors(np);
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < long(np); ++p) {
    try {
      const double a = edges[p + 1], c = edges[p], mid = 0.5 * (a + c), half = 0.5 * (c - a);
      double s = 0.0;
      for (std::size_t q = 0; q < gx.size(); ++q)
        for (double sg : {-1.0, 1.0}) {
          const double u = mid + sg * half * gx[q];
          const double eta = std::exp(u);
          s += gw[q] * (density(eta) + density(-eta)) * eta;
        }
      panel[p] = s * half;
    } catch (const std::exception& e) {
      errors[p] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw EvaluationError(e);

  // cumulative Q^2 down to each eps
  double acc = 0.0;
  std::size_t p = 0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    while (p < np && edges[p + 1] >= cuts[i] - 1e-12) acc += panel[p++];
    scan.q2.push_back(acc);
  }

  std::vector<double> x;
  for (double e : eps_list) x.push_back(std::log(eps_list.front() / e));
  const Line l = fit_line(x, scan.q2);
  scan.fitted_c = l.slope;
  scan.intercept = l.intercept;
  scan.c_over_t2 = t > 0.0 ? l.slope / (t * t) : 0.0;
  const double rise = l.slope * x.back();
  scan.relative_residual = rise > 0.0 ? l.rms / rise : kInf;
  const std::size_t k = x.size() - 1;
  const double predicted = l.slope * (x[k] - x[k - 1]);
  scan.last_increment_ratio = predicted > 0.0 ? (scan.q2[k] - scan.q2[k - 1]) / predicted : 0.0;
  scan.divergent = l.slope > 0.0 && scan.relative_residual <= 0.1 && scan.last_increment_ratio >= 0.5;
  return scan;
}

}  // namespace fkdv
