#include "fkdv/kernels.hpp"

#include <atomic>
#include <vector>

namespace fkdv::kernels {

namespace {
std::atomic<std::size_t> g_threshold{1u << 14};

std::size_t chunk_count(std::size_t n) { return (n + kSumChunk - 1) / kSumChunk; }
}  // namespace

namespace serial {

void multiply(std::span<cplx> a, std::span<const cplx> b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

void multiply(std::span<cplx> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

void alternate_scale(std::span<cplx> a, double scale) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= (i % 2 == 0) ? scale : -scale;
}

void real_part(std::span<const cplx> in, std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i].real();
}

void to_complex(std::span<const double> in, std::span<cplx> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = cplx(in[i], 0.0);
}

void square(std::span<const double> in, std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * in[i];
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

double chunked_sum(std::span<const double> v) {
  const std::size_t nc = chunk_count(v.size());
  double total = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t lo = c * kSumChunk;
    const std::size_t hi = std::min(v.size(), lo + kSumChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    total += s;
  }
  return total;
}

double weighted_square_sum(std::span<const double> v, std::span<const double> w) {
  const std::size_t nc = chunk_count(v.size());
  double total = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t lo = c * kSumChunk;
    const std::size_t hi = std::min(v.size(), lo + kSumChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * v[i] * v[i];
    total += s;
  }
  return total;
}

}  // namespace serial

namespace omp {

void multiply(std::span<cplx> a, std::span<const cplx> b) {
  const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) a[i] *= b[i];
}

void multiply(std::span<cplx> a, std::span<const double> b) {
  const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) a[i] *= b[i];
}

void alternate_scale(std::span<cplx> a, double scale) {
  const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) a[i] *= (i % 2 == 0) ? scale : -scale;
}

void real_part(std::span<const cplx> in, std::span<double> out) {
  const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = in[i].real();
}

void to_complex(std::span<const double> in, std::span<cplx> out) {
  const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = cplx(in[i], 0.0);
}

void square(std::span<const double> in, std::span<double> out) {
  const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = in[i] * in[i];
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) y[i] += a * x[i];
}

void product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double chunked_sum(std::span<const double> v) {
  const long nc = static_cast<long>(chunk_count(v.size()));
  std::vector<double> partial(nc);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nc; ++c) {
    const std::size_t lo = c * kSumChunk;
    const std::size_t hi = std::min(v.size(), lo + kSumChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double weighted_square_sum(std::span<const double> v, std::span<const double> w) {
  const long nc = static_cast<long>(chunk_count(v.size()));
  std::vector<double> partial(nc);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nc; ++c) {
    const std::size_t lo = c * kSumChunk;
    const std::size_t hi = std::min(v.size(), lo + kSumChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * v[i] * v[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace omp

std::size_t parallel_threshold() { return g_threshold.load(std::memory_order_relaxed); }
void set_parallel_threshold(std::size_t n) { g_threshold.store(n, std::memory_order_relaxed); }

namespace {
bool use_omp(std::size_t n) { return n >= parallel_threshold(); }
}  // namespace

void multiply(std::span<cplx> a, std::span<const cplx> b) {
  use_omp(a.size()) ? omp::multiply(a, b) : serial::multiply(a, b);
}
void multiply(std::span<cplx> a, std::span<const double> b) {
  use_omp(a.size()) ? omp::multiply(a, b) : serial::multiply(a, b);
}
void alternate_scale(std::span<cplx> a, double scale) {
  use_omp(a.size()) ? omp::alternate_scale(a, scale) : serial::alternate_scale(a, scale);
}
void real_part(std::span<const cplx> in, std::span<double> out) {
  use_omp(in.size()) ? omp::real_part(in, out) : serial::real_part(in, out);
}
void to_complex(std::span<const double> in, std::span<cplx> out) {
  use_omp(in.size()) ? omp::to_complex(in, out) : serial::to_complex(in, out);
}
void square(std::span<const double> in, std::span<double> out) {
  use_omp(in.size()) ? omp::square(in, out) : serial::square(in, out);
}
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  use_omp(x.size()) ? omp::axpy(a, x, y) : serial::axpy(a, x, y);
}
void product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  use_omp(a.size()) ? omp::product(a, b, out) : serial::product(a, b, out);
}
double chunked_sum(std::span<const double> v) {
  return use_omp(v.size()) ? omp::chunked_sum(v) : serial::chunked_sum(v);
}
double weighted_square_sum(std::span<const double> v, std::span<const double> w) {
  return use_omp(v.size()) ? omp::weighted_square_sum(v, w) : serial::weighted_square_sum(v, w);
}

}  // namespace fkdv::kernels
