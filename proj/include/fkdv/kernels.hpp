#pragma once

// Data-parallel inner loops of the spectral code.
//
// Every kernel exists twice: a plain serial reference and an OpenMP version.
// The two are bit-identical: loops are elementwise, and the one reduction
// (chunked_sum) sums fixed-size chunks in index order whatever the thread
// count. The dispatching versions in namespace `kernels` pick OpenMP above
// `parallel_threshold()` elements.

#include <complex>
#include <span>

namespace fkdv::kernels {

using cplx = std::complex<double>;

namespace serial {
void multiply(std::span<cplx> a, std::span<const cplx> b);
void multiply(std::span<cplx> a, std::span<const double> b);
void alternate_scale(std::span<cplx> a, double scale);
void real_part(std::span<const cplx> in, std::span<double> out);
void to_complex(std::span<const double> in, std::span<cplx> out);
void square(std::span<const double> in, std::span<double> out);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void product(std::span<const double> a, std::span<const double> b, std::span<double> out);
double chunked_sum(std::span<const double> v);
double weighted_square_sum(std::span<const double> v, std::span<const double> w);
}  // namespace serial

namespace omp {
void multiply(std::span<cplx> a, std::span<const cplx> b);
void multiply(std::span<cplx> a, std::span<const double> b);
void alternate_scale(std::span<cplx> a, double scale);
void real_part(std::span<const cplx> in, std::span<double> out);
void to_complex(std::span<const double> in, std::span<cplx> out);
void square(std::span<const double> in, std::span<double> out);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void product(std::span<const double> a, std::span<const double> b, std::span<double> out);
double chunked_sum(std::span<const double> v);
double weighted_square_sum(std::span<const double> v, std::span<const double> w);
}  // namespace omp

/// Element count above which the dispatchers use the OpenMP versions.
std::size_t parallel_threshold();
void set_parallel_threshold(std::size_t n);

/// Chunk length of the deterministic reduction.
inline constexpr std::size_t kSumChunk = 256;

void multiply(std::span<cplx> a, std::span<const cplx> b);
void multiply(std::span<cplx> a, std::span<const double> b);
void alternate_scale(std::span<cplx> a, double scale);
void real_part(std::span<const cplx> in, std::span<double> out);
void to_complex(std::span<const double> in, std::span<cplx> out);
void square(std::span<const double> in, std::span<double> out);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void product(std::span<const double> a, std::span<const double> b, std::span<double> out);
double chunked_sum(std::span<const double> v);
/// sum_i w_i v_i^2, chunked like chunked_sum.
double weighted_square_sum(std::span<const double> v, std::span<const double> w);

}  // namespace fkdv::kernels
