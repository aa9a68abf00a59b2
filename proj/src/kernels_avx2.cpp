#include "anchor/kernels.hpp"

#if defined(ANCHOR_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <algorithm>

// AVX2 + FMA variants. 4 doubles per lane, two accumulators in the
// reductions for ILP, scalar tail for the remainder.

namespace anchor::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(a + i);
    const __m256d v1 = _mm256_loadu_pd(a + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  if (i + 4 <= n) {
    const __m256d v = _mm256_loadu_pd(a + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double diff_squared_norm(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  if (i + 4 <= n) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d, d, acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void cross_gram(const double* a, std::size_t da, const double* b, std::size_t db,
                std::size_t n, double* out) {
  std::fill(out, out + da * db, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const double* ar = a + r * da;
    const double* br = b + r * db;
    for (std::size_t j = 0; j < da; ++j) {
      const __m256d aj = _mm256_set1_pd(ar[j]);
      double* orow = out + j * db;
      std::size_t k = 0;
      for (; k + 4 <= db; k += 4) {
        const __m256d cur = _mm256_loadu_pd(orow + k);
        _mm256_storeu_pd(orow + k, _mm256_fmadd_pd(aj, _mm256_loadu_pd(br + k), cur));
      }
      for (; k < db; ++k) orow[k] += ar[j] * br[k];
    }
  }
}

void gram(const double* a, std::size_t d, std::size_t n, double* out) {
  cross_gram(a, d, a, d, n, out);
}

void matmul_abt(const double* a, std::size_t ra, const double* b, std::size_t rb,
                std::size_t k, double* out) {
  for (std::size_t i = 0; i < ra; ++i) {
    const double* ai = a + i * k;
    double* orow = out + i * rb;
    for (std::size_t j = 0; j < rb; ++j) orow[j] = dot(ai, b + j * k, k);
  }
}

}  // namespace anchor::kernels::avx2

#endif  // ANCHOR_HAVE_AVX2_KERNELS
