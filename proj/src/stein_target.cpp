#include "fkdv/stein_target.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "fkdv/errors.hpp"
#include "fkdv/multiplier.hpp"
#include "fkdv/truncated_weight.hpp"

namespace fkdv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
}  // namespace

SteinTarget SteinTarget::constant_one() { return {}; }

SteinTarget SteinTarget::power_cutoff(double beta) {
  if (!(beta > 0.0)) throw ConfigError("power_cutoff needs beta > 0");
  SteinTarget t;
  t.kind = TargetKind::power_cutoff;
  t.beta = beta;
  return t;
}

SteinTarget SteinTarget::signed_power_cutoff(double beta) {
  if (!(beta > 0.0)) throw ConfigError("signed_power_cutoff needs beta > 0");
  SteinTarget t;
  t.kind = TargetKind::signed_power_cutoff;
  t.beta = beta;
  return t;
}

SteinTarget SteinTarget::propagator(double alpha, double time) {
  if (!(alpha > -1.0 && alpha < 1.0) || alpha == 0.0)
    throw ConfigError("propagator target needs alpha in (-1,1) without 0");
  SteinTarget t;
  t.kind = TargetKind::propagator;
  t.alpha = alpha;
  t.t = time;
  return t;
}

SteinTarget SteinTarget::sign_propagator(double time) {
  SteinTarget t;
  t.kind = TargetKind::sign_propagator;
  t.t = time;
  return t;
}

SteinTarget SteinTarget::weight(double theta, double n_w) {
  if (!(theta > 0.0)) throw ConfigError("weight target needs theta > 0");
  if (!(n_w >= 1.0)) throw ConfigError("weight target needs N >= 1");
  SteinTarget t;
  t.kind = TargetKind::weight;
  t.theta = theta;
  t.n_w = n_w;
  return t;
}

SteinTarget SteinTarget::sampled(std::vector<double> values, double x0, double h) {
  if (values.size() < 4) throw ConfigError("sampled target needs at least 4 samples");
  if (!(h > 0.0)) throw ConfigError("sampled target spacing must be positive");
  SteinTarget t;
  t.kind = TargetKind::sampled;
  t.samples = std::move(values);
  t.sample_x0 = x0;
  t.sample_h = h;
  return t;
}

SteinTarget SteinTarget::with_bracket() const {
  SteinTarget t = *this;
  t.bracket = true;
  return t;
}

SteinTarget SteinTarget::with_cutoff(double a) const {
  if (!(a > 0.0)) throw ConfigError("cutoff radius must be positive");
  SteinTarget t = *this;
  t.cutoff = a;
  return t;
}

SteinTarget SteinTarget::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw ConfigError("dilation must be positive");
  SteinTarget t = *this;
  t.dilation *= lambda;
  return t;
}

SteinTarget SteinTarget::scaled(cplx a) const {
  SteinTarget t = *this;
  t.amplitude *= a;
  return t;
}

SteinTarget SteinTarget::derivative() const {
  if (differentiated) throw ConfigError("target is already differentiated");
  SteinTarget t = *this;
  t.differentiated = true;
  return t;
}

std::string SteinTarget::name() const {
  auto f = format_double;
  std::string s;
  switch (kind) {
    case TargetKind::constant: s = "constant"; break;
    case TargetKind::power_cutoff: s = "power_cutoff(" + f(beta) + ")"; break;
    case TargetKind::signed_power_cutoff: s = "signed_power_cutoff(" + f(beta) + ")"; break;
    case TargetKind::propagator: s = "propagator(" + f(alpha) + "," + f(t) + ")"; break;
    case TargetKind::sign_propagator: s = "sign_propagator(" + f(t) + ")"; break;
    case TargetKind::weight: s = "weight(" + f(theta) + "," + f(n_w) + ")"; break;
    case TargetKind::sampled: s = "sampled(" + std::to_string(samples.size()) + ")"; break;
  }
  if (bracket) s = "bracket*" + s;
  if (cutoff) s += "*phi(" + f(*cutoff) + ")";
  if (dilation != 1.0) s += "@" + f(dilation);
  if (amplitude != cplx(1.0)) s = "(" + f(amplitude.real()) + (amplitude.imag() ? "+" + f(amplitude.imag()) + "i" : "") + ")*" + s;
  if (differentiated) s = "d/dxi " + s;
  return s;
}

struct TargetEval::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> s;
  double lo, hi, v_lo, v_hi;
};

TargetEval::TargetEval(const SteinTarget& t) : spec_(t) {
  const double lam = spec_.dilation;
  if (t.kind == TargetKind::weight) weight_ = std::make_unique<TruncatedWeight>(t.n_w, t.theta);
  if (t.kind == TargetKind::sampled) {
    const auto& v = t.samples;
    const double hi = t.sample_x0 + t.sample_h * double(v.size() - 1);
    // clamped: zero end slopes estimated from the data
    const double d0 = (v[1] - v[0]) / t.sample_h, d1 = (v[v.size() - 1] - v[v.size() - 2]) / t.sample_h;
    spline_ = std::make_unique<Spline>(Spline{
        boost::math::interpolators::cardinal_cubic_b_spline<double>(v.begin(), v.end(), t.sample_x0, t.sample_h, d0, d1),
        t.sample_x0, hi, v.front(), v.back()});
  }
  if (t.differentiated && tail() != TailKind::constant_limits)
    throw ConfigError("only compactly varying targets may be differentiated");

  auto both = [&](double lo, double hi, double w) {
    features_.push_back({lo / lam, hi / lam, w / lam});
    features_.push_back({-hi / lam, -lo / lam, w / lam});
  };
  auto edge = [&](double z) {
    breaks_.push_back(z / lam);
    breaks_.push_back(-z / lam);
  };
  switch (t.kind) {
    case TargetKind::power_cutoff:
    case TargetKind::signed_power_cutoff:
      both(1.0, 2.0, 1.0 / 32.0);
      edge(1.0), edge(2.0);
      break;
    case TargetKind::weight:
      both(0.0, 3.0 * t.n_w, t.n_w / 32.0);
      edge(t.n_w), edge(weight_->fade_start()), edge(weight_->fade_start() + t.n_w);
      break;
    case TargetKind::sampled:
      features_.push_back({spline_->lo / lam, spline_->hi / lam, t.sample_h / lam});
      breaks_.push_back(spline_->lo / lam);
      breaks_.push_back(spline_->hi / lam);
      break;
    default:
      break;
  }
  if (t.bracket) both(0.0, 8.0, 0.125);
  if (t.cutoff) {
    both(*t.cutoff, 2.0 * *t.cutoff, *t.cutoff / 32.0);
    edge(*t.cutoff), edge(2.0 * *t.cutoff);
  }
  for (const auto& s : singular_points()) breaks_.push_back(s.location);
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
}

TargetEval::~TargetEval() = default;

cplx TargetEval::shape(double z) const {
  const auto& t = spec_;
  cplx v;
  switch (t.kind) {
    case TargetKind::constant: v = 1.0; break;
    case TargetKind::power_cutoff: v = std::pow(std::abs(z), t.beta) * cutoff_profile(z, 1.0); break;
    case TargetKind::signed_power_cutoff: v = sgn(z) * std::pow(std::abs(z), t.beta) * cutoff_profile(z, 1.0); break;
    case TargetKind::propagator: v = z == 0.0 ? cplx(1.0) : std::exp(cplx(0.0, t.t * z * std::pow(std::abs(z), t.alpha))); break;
    case TargetKind::sign_propagator: v = std::exp(cplx(0.0, t.t * sgn(z))); break;
    case TargetKind::weight: v = (*weight_)(std::abs(z)); break;
    case TargetKind::sampled:
      if (z <= spline_->lo) v = spline_->v_lo;
      else if (z >= spline_->hi) v = spline_->v_hi;
      else v = spline_->s(z);
      break;
  }
  if (t.bracket) v /= 1.0 + z * z;
  if (t.cutoff) v *= cutoff_profile(z, *t.cutoff);
  return v;
}

cplx TargetEval::raw(double xi) const { return spec_.amplitude * shape(spec_.dilation * xi); }

cplx TargetEval::operator()(double xi) const {
  if (!spec_.differentiated) return raw(xi);
  // avoid straddling a singular point
  double h = 1e-5 * std::max(std::abs(xi), 1e-3 / spec_.dilation);
  for (const auto& s : singular_points()) {
    const double d = std::abs(xi - s.location);
    if (d > 0.0) h = std::min(h, 0.25 * d);
  }
  return (raw(xi + h) - raw(xi - h)) / (2.0 * h);
}

bool TargetEval::identically_constant() const {
  const auto& t = spec_;
  if (t.amplitude == cplx(0.0)) return true;
  if (t.bracket || t.cutoff) return false;
  if (t.kind == TargetKind::constant) return true;
  if ((t.kind == TargetKind::propagator || t.kind == TargetKind::sign_propagator) && t.t == 0.0) return true;
  if (t.kind == TargetKind::sign_propagator && std::sin(t.t) == 0.0) return true;
  return false;
}

TailKind TargetEval::tail() const {
  const auto& t = spec_;
  if (t.cutoff) return TailKind::constant_limits;
  switch (t.kind) {
    case TargetKind::power_cutoff:
    case TargetKind::signed_power_cutoff:
      return TailKind::constant_limits;
    case TargetKind::propagator:
      if (t.bracket) return TailKind::decaying;
      return t.t == 0.0 ? TailKind::constant_limits : TailKind::oscillatory;
    default:
      return t.bracket ? TailKind::decaying : TailKind::constant_limits;
  }
}

double TargetEval::support_radius() const {
  const auto& t = spec_;
  double z = 0.0;
  if (t.cutoff) z = 2.0 * *t.cutoff;
  else if (t.kind == TargetKind::power_cutoff || t.kind == TargetKind::signed_power_cutoff) z = 2.0;
  else if (t.kind == TargetKind::weight) z = 3.0 * t.n_w;
  else if (t.kind == TargetKind::sampled) z = std::max(std::abs(spline_->lo), std::abs(spline_->hi));
  return z / t.dilation;
}

cplx TargetEval::limit_plus() const {
  if (spec_.differentiated) return 0.0;
  const double r = support_radius();
  return raw(std::max(2.0 * r, 1.0 / spec_.dilation) + 1.0);
}

cplx TargetEval::limit_minus() const {
  if (spec_.differentiated) return 0.0;
  const double r = support_radius();
  return raw(-std::max(2.0 * r, 1.0 / spec_.dilation) - 1.0);
}

double TargetEval::decay_bound(double r) const {
  const auto& t = spec_;
  const double z = t.dilation * r;
  double sup = 1.0;
  if (t.kind == TargetKind::weight) sup = weight_->plateau();
  if (t.kind == TargetKind::sampled)
    for (double v : t.samples) sup = std::max(sup, std::abs(v));
  return std::abs(t.amplitude) * sup / (1.0 + z * z);
}

double TargetEval::phase_rate(double xi) const {
  const auto& t = spec_;
  if (t.kind != TargetKind::propagator || t.t == 0.0) return 0.0;
  const double lam = t.dilation;
  const double z = std::abs(lam * xi);
  if (z == 0.0) return t.alpha < 0.0 ? kInf : 0.0;
  return std::abs(t.t) * (1.0 + t.alpha) * std::pow(z, t.alpha) * lam;
}

double TargetEval::phase(double xi) const {
  const auto& t = spec_;
  if (t.kind != TargetKind::propagator) return 0.0;
  const double z = t.dilation * xi;
  return z == 0.0 ? 0.0 : t.t * z * std::pow(std::abs(z), t.alpha);
}

std::vector<SingularPoint> TargetEval::singular_points() const {
  const auto& t = spec_;
  const double amp = std::abs(t.amplitude);
  const double lam = t.dilation;
  const double shift = t.differentiated ? 1.0 : 0.0;
  std::vector<SingularPoint> out;
  switch (t.kind) {
    case TargetKind::power_cutoff:
    case TargetKind::signed_power_cutoff:
      if (t.beta < 1.0 + shift || std::floor(t.beta) != t.beta)
        out.push_back({0.0, t.beta - shift, 2.0 * amp * std::pow(lam, t.beta) * (t.differentiated ? t.beta : 1.0)});
      break;
    case TargetKind::propagator:
      if (t.t != 0.0 && (t.alpha < 0.0 || t.differentiated))
        out.push_back({0.0, 1.0 + t.alpha - shift,
                       2.0 * amp * std::abs(t.t) * std::pow(lam, 1.0 + t.alpha) * (t.differentiated ? 1.0 + t.alpha : 1.0)});
      break;
    case TargetKind::sign_propagator:
      if (std::sin(t.t) != 0.0) out.push_back({0.0, -shift, 2.0 * amp});
      break;
    default:
      break;
  }
  return out;
}

}  // namespace fkdv
