#include "anchor/kernels.hpp"

#if defined(ANCHOR_HAVE_NEON_KERNELS)

#include <arm_neon.h>

#include <algorithm>

// NEON variants for aarch64 (2 doubles per lane), mirroring the AVX2
// loop structure.

namespace anchor::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  if (i + 2 <= n) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    i += 2;
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(const double* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t v0 = vld1q_f64(a + i);
    const float64x2_t v1 = vld1q_f64(a + i + 2);
    acc0 = vfmaq_f64(acc0, v0, v0);
    acc1 = vfmaq_f64(acc1, v1, v1);
  }
  if (i + 2 <= n) {
    const float64x2_t v = vld1q_f64(a + i);
    acc0 = vfmaq_f64(acc0, v, v);
    i += 2;
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double diff_squared_norm(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc0 = vfmaq_f64(acc0, d0, d0);
    acc1 = vfmaq_f64(acc1, d1, d1);
  }
  if (i + 2 <= n) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc0 = vfmaq_f64(acc0, d, d);
    i += 2;
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
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
      const float64x2_t aj = vdupq_n_f64(ar[j]);
      double* orow = out + j * db;
      std::size_t k = 0;
      for (; k + 2 <= db; k += 2) {
        vst1q_f64(orow + k, vfmaq_f64(vld1q_f64(orow + k), aj, vld1q_f64(br + k)));
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

}  // namespace anchor::kernels::neon

#endif  // ANCHOR_HAVE_NEON_KERNELS
