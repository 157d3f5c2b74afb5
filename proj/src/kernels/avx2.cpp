#include "sldg/kernels.hpp"

#if SLDG_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <cmath>

#define SLDG_AVX2 __attribute__((target("avx2,fma")))

namespace sldg::kernels::avx2 {

namespace {

SLDG_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

SLDG_AVX2 double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += pa[i] * pb[i];
  return s;
}

SLDG_AVX2 double nrm2(std::span<const double> a) {
  const double s = dot(a, a);
  if (!(s > 1e-280 && s < 1e280)) return scalar::nrm2_rescaled(a);
  return std::sqrt(s);
}

SLDG_AVX2 void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const double* px = x.data();
  double* py = y.data();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(py + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i)));
  }
  for (; i < n; ++i) py[i] += alpha * px[i];
}

SLDG_AVX2 void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y) {
  const double* px = x.data();
  for (int r = 0; r < a.rows; ++r) {
    std::int32_t p = a.row_ptr[r];
    const std::int32_t end = a.row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; p + 4 <= end; p += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.cols.data() + p));
      __m256d xv = _mm256_i32gather_pd(px, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.vals.data() + p), xv, acc);
    }
    double s = hsum(acc);
    for (; p < end; ++p) s += a.vals[p] * px[a.cols[p]];
    y[r] = s;
  }
}

}  // namespace sldg::kernels::avx2

#endif
