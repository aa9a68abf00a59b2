#include "anchor/kernels.hpp"

#include <algorithm>

// Reference implementations. Plain loops, single accumulator; the SIMD
// variants are validated against these.

namespace anchor::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double diff_squared_norm(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
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
      const double aj = ar[j];
      double* orow = out + j * db;
      for (std::size_t k = 0; k < db; ++k) orow[k] += aj * br[k];
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

}  // namespace anchor::kernels::scalar
