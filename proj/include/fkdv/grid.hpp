#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace fkdv {

using cplx = std::complex<double>;

/// Periodic grid on [-L/2, L/2) standing in for the real line.
///
/// Wavenumbers are stored in FFT order: index i holds k = 2*pi*m/L with
/// m = i for i < n/2 and m = i - n otherwise, so index n/2 is the
/// (unpaired) Nyquist mode m = -n/2.
class Grid {
 public:
  Grid(int n, double length);

  int n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return dx_; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> wavenumbers() const { return k_; }
  double node(int j) const { return nodes_[j]; }
  double wavenumber(int i) const { return k_[i]; }
  int nyquist_index() const { return n_ / 2; }
  /// Signed mode index m of FFT slot i.
  int mode(int i) const { return i < n_ / 2 ? i : i - n_; }
  double k_max() const { return k_[n_ / 2 - 1]; }
  /// Smallest positive wavenumber 2*pi/L.
  double k1() const { return k_[1]; }

 private:
  int n_;
  double length_;
  double dx_;
  std::vector<double> nodes_;
  std::vector<double> k_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validated grid construction: n even, n >= 8, length > 0.
GridPtr make_grid(int n, double length);

/// Real samples of u at the grid nodes.
struct Field {
  GridPtr grid;
  std::vector<double> samples;

  Field() = default;
  explicit Field(GridPtr g) : grid(std::move(g)), samples(grid->n(), 0.0) {}
  Field(GridPtr g, std::vector<double> s) : grid(std::move(g)), samples(std::move(s)) {}

  int size() const { return static_cast<int>(samples.size()); }
  double& operator[](int j) { return samples[j]; }
  double operator[](int j) const { return samples[j]; }
};

/// Complex samples; produced by multipliers without Hermitian symmetry.
struct ComplexField {
  GridPtr grid;
  std::vector<cplx> samples;
};

/// Coefficients u_hat(k_m) = dx * sum_j u_j exp(-i k_m x_j), FFT order.
/// This approximates the continuous transform int u(x) exp(-i x xi) dx.
struct Spectrum {
  GridPtr grid;
  std::vector<cplx> coeffs;

  Spectrum() = default;
  explicit Spectrum(GridPtr g) : grid(std::move(g)), coeffs(grid->n(), cplx{}) {}

  cplx& operator[](int i) { return coeffs[i]; }
  cplx operator[](int i) const { return coeffs[i]; }
};

/// Samples f(x_j) of a function of position.
template <class F>
Field sample(GridPtr grid, F&& f) {
  Field out(grid);
  for (int j = 0; j < grid->n(); ++j) out.samples[j] = f(grid->node(j));
  return out;
}

bool all_finite(std::span<const double> v);

}  // namespace fkdv
