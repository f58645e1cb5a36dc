#pragma once

#include <cstdint>
#include <string>

#include "fkdv/grid.hpp"

namespace fkdv {

enum class IcFamily { gaussian, odd_gaussian, sine_packet, random_band, file };

/// Initial datum u0. Parameters are read per family:
///   gaussian(A, sigma, x0)      A exp(-(x-x0)^2/sigma^2)
///   odd_gaussian(A, sigma)      A x exp(-x^2/sigma^2)
///   sine_packet(A, k, sigma)    A sin(kx) exp(-x^2/sigma^2)
///   random_band(seed, k_lo, k_hi, A)
///   file(path)                  two-column x,u CSV on the same grid
struct InitialCondition {
  IcFamily family = IcFamily::gaussian;
  double amplitude = 1.0;
  double sigma = 1.0;
  double x0 = 0.0;
  double k = 1.0;
  double k_lo = 1.0;
  double k_hi = 4.0;
  std::uint64_t seed = 0;
  std::string path;
  bool zero_mean_projected = false;

  static InitialCondition gaussian(double a, double sigma, double x0 = 0.0);
  static InitialCondition odd_gaussian(double a, double sigma);
  static InitialCondition sine_packet(double a, double k, double sigma);
  static InitialCondition random_band(std::uint64_t seed, double k_lo, double k_hi, double a);
  static InitialCondition file(std::string path);
};

/// Envelope width of random_band data.
inline constexpr double kRandomBandEnvelope = 4.0;

/// Parses "gaussian(0.2,1,0)" and friends. ConfigError on malformed input.
InitialCondition parse_initial_condition(const std::string& text);
/// Inverse of parse_initial_condition (17 significant digits).
std::string to_string(const InitialCondition& ic);

Field make_initial(const GridPtr& grid, const InitialCondition& ic);

/// Removes the mean with a localized profile of the same centre and twice the
/// width, then clears the round-off residue with a constant shift.
void project_zero_mean(Field& f, double centre, double width);

}  // namespace fkdv
