#include "fkdv/initial_condition.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fkdv/errors.hpp"
#include "fkdv/io.hpp"
#include "fkdv/operators.hpp"

namespace fkdv {

InitialCondition InitialCondition::gaussian(double a, double sigma, double x0) {
  InitialCondition ic;
  ic.family = IcFamily::gaussian;
  ic.amplitude = a;
  ic.sigma = sigma;
  ic.x0 = x0;
  return ic;
}

InitialCondition InitialCondition::odd_gaussian(double a, double sigma) {
  InitialCondition ic;
  ic.family = IcFamily::odd_gaussian;
  ic.amplitude = a;
  ic.sigma = sigma;
  return ic;
}

InitialCondition InitialCondition::sine_packet(double a, double k, double sigma) {
  InitialCondition ic;
  ic.family = IcFamily::sine_packet;
  ic.amplitude = a;
  ic.k = k;
  ic.sigma = sigma;
  return ic;
}

InitialCondition InitialCondition::random_band(std::uint64_t seed, double k_lo, double k_hi, double a) {
  InitialCondition ic;
  ic.family = IcFamily::random_band;
  ic.seed = seed;
  ic.k_lo = k_lo;
  ic.k_hi = k_hi;
  ic.amplitude = a;
  ic.sigma = kRandomBandEnvelope;
  return ic;
}

InitialCondition InitialCondition::file(std::string path) {
  InitialCondition ic;
  ic.family = IcFamily::file;
  ic.path = std::move(path);
  return ic;
}

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

double to_real(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("initial condition " + where + ": '" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v))
    throw ConfigError("initial condition " + where + ": '" + text + "' is not a finite number");
  return v;
}

// Uniform double in [0,1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConfigError(std::string("initial condition ") + what + " must be positive");
}

}  // namespace

InitialCondition parse_initial_condition(const std::string& raw) {
  const std::string text = trim(raw);
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')')
    throw ConfigError("initial condition '" + text + "' must look like name(arg,...)");
  const std::string name = trim(text.substr(0, open));
  const std::string inner = text.substr(open + 1, text.size() - open - 2);
  std::vector<std::string> args;
  std::size_t start = 0;
  while (true) {
    const auto comma = inner.find(',', start);
    args.push_back(trim(inner.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw ConfigError("initial condition " + name + " takes " + std::to_string(lo) +
                        (lo == hi ? "" : "-" + std::to_string(hi)) + " arguments, got " +
                        std::to_string(args.size()));
  };
  auto num = [&](std::size_t i) { return to_real(args[i], name); };

  InitialCondition ic;
  if (name == "gaussian") {
    need(2, 3);
    ic = InitialCondition::gaussian(num(0), num(1), args.size() == 3 ? num(2) : 0.0);
  } else if (name == "odd_gaussian") {
    need(2, 2);
    ic = InitialCondition::odd_gaussian(num(0), num(1));
  } else if (name == "sine_packet") {
    need(3, 3);
    ic = InitialCondition::sine_packet(num(0), num(1), num(2));
  } else if (name == "random_band") {
    need(4, 4);
    std::uint64_t seed = 0;
    try {
      std::size_t used = 0;
      seed = std::stoull(args[0], &used);
      if (used != args[0].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("random_band seed '" + args[0] + "' is not a non-negative integer");
    }
    ic = InitialCondition::random_band(seed, num(1), num(2), num(3));
    if (!(ic.k_hi > ic.k_lo && ic.k_lo >= 0.0))
      throw ConfigError("random_band needs 0 <= k_lo < k_hi");
  } else if (name == "file") {
    need(1, 1);
    if (args[0].empty()) throw ConfigError("file() needs a path");
    ic = InitialCondition::file(args[0]);
  } else {
    throw ConfigError("unknown initial condition family '" + name + "'");
  }
  if (ic.family != IcFamily::file) require_positive(ic.sigma, "sigma");
  return ic;
}

std::string to_string(const InitialCondition& ic) {
  auto f = format_double;
  switch (ic.family) {
    case IcFamily::gaussian:
      return "gaussian(" + f(ic.amplitude) + "," + f(ic.sigma) + "," + f(ic.x0) + ")";
    case IcFamily::odd_gaussian:
      return "odd_gaussian(" + f(ic.amplitude) + "," + f(ic.sigma) + ")";
    case IcFamily::sine_packet:
      return "sine_packet(" + f(ic.amplitude) + "," + f(ic.k) + "," + f(ic.sigma) + ")";
    case IcFamily::random_band:
      return "random_band(" + std::to_string(ic.seed) + "," + f(ic.k_lo) + "," + f(ic.k_hi) + "," +
             f(ic.amplitude) + ")";
    case IcFamily::file:
      return "file(" + ic.path + ")";
  }
  return "";
}

void project_zero_mean(Field& f, double centre, double width) {
  const double m = mean_value(f);
  const double w = 2.0 * width;
  const double norm = 1.0 / (w * std::sqrt(std::numbers::pi));
  for (int j = 0; j < f.size(); ++j) {
    const double y = (f.grid->node(j) - centre) / w;
    f[j] -= m * norm * std::exp(-y * y);
  }
  const double residue = mean_value(f) / f.grid->length();
  for (double& v : f.samples) v -= residue;
}

Field make_initial(const GridPtr& grid, const InitialCondition& ic) {
  Field u(grid);
  const double a = ic.amplitude, s = ic.sigma;
  switch (ic.family) {
    case IcFamily::gaussian:
      u = sample(grid, [&](double x) {
        const double y = (x - ic.x0) / s;
        return a * std::exp(-y * y);
      });
      break;
    case IcFamily::odd_gaussian:
      u = sample(grid, [&](double x) { return a * x * std::exp(-(x * x) / (s * s)); });
      break;
    case IcFamily::sine_packet:
      u = sample(grid, [&](double x) { return a * std::sin(ic.k * x) * std::exp(-(x * x) / (s * s)); });
      break;
    case IcFamily::random_band: {
      std::mt19937_64 rng(ic.seed);
      constexpr int kModes = 16;
      std::vector<double> kk(kModes), ca(kModes), cb(kModes);
      for (int q = 0; q < kModes; ++q) {
        kk[q] = ic.k_lo + (ic.k_hi - ic.k_lo) * unit(rng);
        ca[q] = 2.0 * unit(rng) - 1.0;
        cb[q] = 2.0 * unit(rng) - 1.0;
      }
      u = sample(grid, [&](double x) {
        double v = 0.0;
        for (int q = 0; q < kModes; ++q) v += ca[q] * std::cos(kk[q] * x) + cb[q] * std::sin(kk[q] * x);
        return v * std::exp(-(x * x) / (s * s));
      });
      double peak = 0.0;
      for (double v : u.samples) peak = std::max(peak, std::abs(v));
      if (peak > 0.0)
        for (double& v : u.samples) v *= a / peak;
      break;
    }
    case IcFamily::file:
      u = read_field(ic.path, grid);
      break;
  }
  if (!all_finite(u.samples)) throw NumericError("initial condition " + to_string(ic) + " is not finite");
  if (ic.zero_mean_projected) {
    const double centre = ic.family == IcFamily::gaussian ? ic.x0 : 0.0;
    const double width = ic.family == IcFamily::file ? 1.0 : s;
    project_zero_mean(u, centre, width);
  }
  return u;
}

}  // namespace fkdv
