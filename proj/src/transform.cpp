#include "fkdv/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "fkdv/errors.hpp"
#include "fkdv/kernels.hpp"

namespace fkdv {

namespace {

// Planning is not thread-safe in FFTW; execution through fftw_execute_dft is.
// FFTW_UNALIGNED lets a cached plan run on any pair of std::vector buffers.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(n, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (!p) throw NumericError("FFTW planning failed for n=" + std::to_string(n), 0.0);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& kv : plans_) fftw_destroy_plan(kv.second);
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void run(int n, int sign, std::vector<cplx>& in, std::vector<cplx>& out) {
  fftw_plan p = PlanCache::instance().get(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

Spectrum forward_impl(const GridPtr& g, std::vector<cplx> buf) {
  const int n = g->n();
  Spectrum s(g);
  run(n, FFTW_FORWARD, buf, s.coeffs);
  kernels::alternate_scale(s.coeffs, g->dx());
  return s;
}

std::vector<cplx> inverse_raw(const Spectrum& s) {
  const GridPtr& g = s.grid;
  const int n = g->n();
  std::vector<cplx> buf(s.coeffs);
  kernels::alternate_scale(buf, 1.0 / g->length());
  std::vector<cplx> out(n);
  run(n, FFTW_BACKWARD, buf, out);
  return out;
}

}  // namespace

Spectrum forward(const Field& f) {
  std::vector<cplx> buf(f.samples.size());
  kernels::to_complex(f.samples, buf);
  return forward_impl(f.grid, std::move(buf));
}

Spectrum forward(const ComplexField& f) { return forward_impl(f.grid, f.samples); }

ComplexField inverse_complex(const Spectrum& s) { return ComplexField{s.grid, inverse_raw(s)}; }

Field inverse(const Spectrum& s) {
  std::vector<cplx> raw = inverse_raw(s);
  Field out(s.grid);
  kernels::real_part(raw, out.samples);
  return out;
}

double l2_norm_sq(const Field& f) {
  std::vector<double> w(f.samples.size(), 1.0);
  return kernels::weighted_square_sum(f.samples, w) * f.grid->dx();
}

double l2_norm(const Field& f) { return std::sqrt(l2_norm_sq(f)); }

double spectral_l2_norm_sq(const Spectrum& s) {
  std::vector<double> a(s.coeffs.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::norm(s.coeffs[i]);
  return kernels::chunked_sum(a) / s.grid->length();
}

}  // namespace fkdv
