#include "fkdv/probes.hpp"

#include <algorithm>
#include <cmath>

#include "fkdv/errors.hpp"
#include "fkdv/initial_condition.hpp"
#include "fkdv/operators.hpp"
#include "fkdv/transform.hpp"

namespace fkdv {

namespace {

Field mul(const Field& a, const Field& b) {
  Field out(a.grid);
  for (int j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

Field sub(const Field& a, const Field& b) {
  Field out(a.grid);
  for (int j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
  return out;
}

double sup(const Field& f) {
  double m = 0.0;
  for (double v : f.samples) m = std::max(m, std::abs(v));
  return m;
}

// D^s without the mean check: positive orders only, and s = 0 is the identity
Field dpow(const Field& f, double s) { return s == 0.0 ? f : frac_deriv(f, s); }

Field dn(Field f, int k) {
  for (int i = 0; i < k; ++i) f = derivative(f);
  return f;
}

}  // namespace

ProbeKind parse_probe_kind(const std::string& s) {
  if (s == "hilbert_frac") return ProbeKind::hilbert_frac;
  if (s == "frac_com") return ProbeKind::frac_com;
  if (s == "triple") return ProbeKind::triple;
  if (s == "projector") return ProbeKind::projector;
  if (s == "hilbert_local") return ProbeKind::hilbert_local;
  throw ConfigError("unknown probe kind '" + s + "' (hilbert_frac, frac_com, triple, projector, hilbert_local)");
}

std::string to_string(ProbeKind k) {
  switch (k) {
    case ProbeKind::hilbert_frac: return "hilbert_frac";
    case ProbeKind::frac_com: return "frac_com";
    case ProbeKind::triple: return "triple";
    case ProbeKind::projector: return "projector";
    case ProbeKind::hilbert_local: return "hilbert_local";
  }
  return "";
}

void validate_probe(ProbeKind kind, const ProbeParams& p) {
  if (p.p != 2) throw ConfigError("only p = 2 is supported");
  auto fail = [&](const std::string& what) { throw ConfigError(to_string(kind) + " requires " + what); };
  switch (kind) {
    case ProbeKind::hilbert_frac:
      if (!(p.beta > 0.0)) fail("beta > 0");
      break;
    case ProbeKind::frac_com:
      if (!(p.beta > 0.0 && p.beta <= 1.0)) fail("0 < beta <= 1");
      break;
    case ProbeKind::triple:
      if (!(p.beta >= 0.0 && p.beta < 1.0)) fail("0 <= beta < 1");
      if (!(p.gamma > 0.0 && p.gamma <= 1.0 - p.beta)) fail("0 < gamma <= 1 - beta");
      break;
    case ProbeKind::projector:
      if (!(p.beta >= 0.0)) fail("beta >= 0");
      if (!(p.gamma > 0.0)) fail("gamma > 0");
      if (!(p.cutoff > 0.0)) fail("cutoff > 0");
      break;
    case ProbeKind::hilbert_local:
      if (p.l < 0 || p.m < 0) fail("non-negative integers l, m");
      if (p.l + p.m < 1) fail("l + m >= 1");
      break;
  }
}

double commutator_probe(ProbeKind kind, const Field& g, const Field& f, const ProbeParams& params) {
  validate_probe(kind, params);
  if (g.grid->n() != f.grid->n() || g.grid->length() != f.grid->length())
    throw ConfigError("probe fields live on different grids");
  Field lhs;
  double rhs = 0.0;
  const double b = params.beta, c = params.gamma;
  switch (kind) {
    case ProbeKind::hilbert_frac: {
      const Field df = dpow(f, b);
      lhs = sub(hilbert(mul(g, df)), mul(g, hilbert(df)));
      rhs = sup(dpow(g, b));
      break;
    }
    case ProbeKind::frac_com:
      lhs = sub(dpow(mul(g, f), b), mul(g, dpow(f, b)));
      rhs = sup(dpow(g, b));
      break;
    case ProbeKind::triple: {
      const Field h = dpow(f, 1.0 - b - c);
      lhs = dpow(sub(dpow(mul(g, h), c), mul(g, dpow(h, c))), b);
      rhs = sup(derivative(g));
      break;
    }
    case ProbeKind::projector: {
      const CutoffSpec cut{params.cutoff};
      const Field h = dpow(f, c);
      lhs = dpow(sub(projector_low(mul(g, h), cut), mul(g, projector_low(h, cut))), b);
      rhs = sup(dpow(g, b + c)) + sup(derivative(g));
      break;
    }
    case ProbeKind::hilbert_local: {
      const Field h = dn(f, params.m);
      lhs = dn(sub(hilbert(mul(g, h)), mul(g, hilbert(h))), params.l);
      rhs = sup(dn(g, params.l + params.m));
      break;
    }
  }
  const double num = l2_norm(lhs);
  const double fn = l2_norm(f);
  const double scale = sup(g) * fn;
  if (num <= 1e-13 * scale || num == 0.0) return 0.0;
  const double den = rhs * fn;
  if (!(den > 0.0)) throw DegenerateInput(to_string(kind) + ": right-hand side vanishes while the commutator does not");
  return num / den;
}

namespace {

std::pair<double, double> ensemble_at(ProbeKind kind, const ProbeParams& params, int pairs, int n, double length,
                                      unsigned long seed) {
  const auto grid = make_grid(n, length);
  std::vector<double> r(pairs);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < pairs; ++i) {
    const auto g = make_initial(grid, InitialCondition::random_band(seed + 2 * i, 0.5, 4.0, 1.0));
    const auto f = make_initial(grid, InitialCondition::random_band(seed + 2 * i + 1, 0.5, 4.0, 1.0));
    r[i] = commutator_probe(kind, g, f, params);
  }
  const double mx = *std::max_element(r.begin(), r.end());
  std::sort(r.begin(), r.end());
  const double med = pairs % 2 ? r[pairs / 2] : 0.5 * (r[pairs / 2 - 1] + r[pairs / 2]);
  return {mx, med};
}

}  // namespace

ProbeEnsemble probe_ensemble(ProbeKind kind, const ProbeParams& params, int pairs, int n, double length,
                             unsigned long seed) {
  validate_probe(kind, params);
  if (pairs < 1) throw ConfigError("ensemble needs at least one pair");
  ProbeEnsemble e;
  e.kind = kind, e.pairs = pairs, e.n = n, e.length = length;
  std::tie(e.max_ratio, e.median) = ensemble_at(kind, params, pairs, n, length, seed);
  std::tie(e.max_ratio_doubled, e.median_doubled) = ensemble_at(kind, params, pairs, 2 * n, length, seed);
  e.finite = std::isfinite(e.max_ratio) && std::isfinite(e.max_ratio_doubled);
  const double lo = std::min(e.max_ratio, e.max_ratio_doubled), hi = std::max(e.max_ratio, e.max_ratio_doubled);
  e.stable = e.finite && hi < 2.0 * lo;
  e.within_median = e.max_ratio <= 10.0 * e.median && e.max_ratio_doubled <= 10.0 * e.median_doubled;
  return e;
}

}  // namespace fkdv
