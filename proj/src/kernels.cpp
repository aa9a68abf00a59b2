#include "anchor/kernels.hpp"

#include <atomic>

namespace anchor::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(ANCHOR_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Backend>& active_slot() {
  static std::atomic<Backend> backend{preferred_backend()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2_fma();
    case Backend::neon:
#if defined(ANCHOR_HAVE_NEON_KERNELS)
      return true;  // NEON is baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

Backend preferred_backend() {
  if (backend_supported(Backend::avx2)) return Backend::avx2;
  if (backend_supported(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

Backend active_backend() { return active_slot().load(std::memory_order_relaxed); }

bool set_active_backend(Backend b) {
  if (!backend_supported(b)) return false;
  active_slot().store(b, std::memory_order_relaxed);
  return true;
}

#if defined(ANCHOR_HAVE_AVX2_KERNELS)
#define ANCHOR_DISPATCH(fn, ...)                                   \
  switch (active_backend()) {                                      \
    case Backend::avx2: return avx2::fn(__VA_ARGS__);              \
    default: return scalar::fn(__VA_ARGS__);                       \
  }
#elif defined(ANCHOR_HAVE_NEON_KERNELS)
#define ANCHOR_DISPATCH(fn, ...)                                   \
  switch (active_backend()) {                                      \
    case Backend::neon: return neon::fn(__VA_ARGS__);              \
    default: return scalar::fn(__VA_ARGS__);                       \
  }
#else
#define ANCHOR_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__);
#endif

double dot(const double* a, const double* b, std::size_t n) {
  ANCHOR_DISPATCH(dot, a, b, n)
}

double squared_norm(const double* a, std::size_t n) {
  ANCHOR_DISPATCH(squared_norm, a, n)
}

double diff_squared_norm(const double* a, const double* b, std::size_t n) {
  ANCHOR_DISPATCH(diff_squared_norm, a, b, n)
}

void cross_gram(const double* a, std::size_t da, const double* b, std::size_t db,
                std::size_t n, double* out) {
  ANCHOR_DISPATCH(cross_gram, a, da, b, db, n, out)
}

void gram(const double* a, std::size_t d, std::size_t n, double* out) {
  ANCHOR_DISPATCH(gram, a, d, n, out)
}

void matmul_abt(const double* a, std::size_t ra, const double* b, std::size_t rb,
                std::size_t k, double* out) {
  ANCHOR_DISPATCH(matmul_abt, a, ra, b, rb, k, out)
}

#undef ANCHOR_DISPATCH

}  // namespace anchor::kernels
