#include "fkdv/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fkdv/errors.hpp"

namespace fkdv {

Grid::Grid(int n, double length) : n_(n), length_(length), dx_(length / n), nodes_(n), k_(n) {
  for (int j = 0; j < n; ++j) nodes_[j] = -0.5 * length + j * dx_;
  const double base = 2.0 * std::numbers::pi / length;
  for (int i = 0; i < n; ++i) k_[i] = base * mode(i);
}

GridPtr make_grid(int n, double length) {
  if (n < 8 || n % 2 != 0)
    throw ConfigError("grid size n must be even and at least 8, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("grid length must be positive and finite, got " + format_double(length));
  return std::make_shared<const Grid>(n, length);
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace fkdv
