#pragma once

//
// Dense double-precision kernels behind the metric computations.
//
// Every kernel exists as a scalar reference implementation plus SIMD
// variants (AVX2+FMA on x86-64, NEON on aarch64). The top-level functions
// dispatch once to the best backend the CPU supports; tests compare the
// backends against each other on the same inputs.
//
// All matrices are row-major contiguous. A kernel's summation order is
// fixed by its implementation, never by thread count, so results are
// reproducible run to run on the same machine.
//

#include <cstddef>
#include <string_view>

namespace anchor::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b);

// Best backend supported by this CPU (what dispatch uses by default).
Backend preferred_backend();
Backend active_backend();
// Returns false (and changes nothing) if the CPU lacks the backend.
bool set_active_backend(Backend b);
bool backend_supported(Backend b);

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);
// sum_i a[i]^2
double squared_norm(const double* a, std::size_t n);
// sum_i (a[i]-b[i])^2
double diff_squared_norm(const double* a, const double* b, std::size_t n);
// out (da x db) = A^T B for A (n x da), B (n x db); accumulated row by row
void cross_gram(const double* a, std::size_t da, const double* b, std::size_t db,
                std::size_t n, double* out);
// out (d x d) = A^T A; identical arithmetic to cross_gram(a, a)
void gram(const double* a, std::size_t d, std::size_t n, double* out);
// out (ra x rb) = A B^T for A (ra x k), B (rb x k); one dot per entry
void matmul_abt(const double* a, std::size_t ra, const double* b, std::size_t rb,
                std::size_t k, double* out);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
double diff_squared_norm(const double* a, const double* b, std::size_t n);
void cross_gram(const double* a, std::size_t da, const double* b, std::size_t db,
                std::size_t n, double* out);
void gram(const double* a, std::size_t d, std::size_t n, double* out);
void matmul_abt(const double* a, std::size_t ra, const double* b, std::size_t rb,
                std::size_t k, double* out);
}  // namespace scalar

#if defined(ANCHOR_HAVE_AVX2_KERNELS)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
double diff_squared_norm(const double* a, const double* b, std::size_t n);
void cross_gram(const double* a, std::size_t da, const double* b, std::size_t db,
                std::size_t n, double* out);
void gram(const double* a, std::size_t d, std::size_t n, double* out);
void matmul_abt(const double* a, std::size_t ra, const double* b, std::size_t rb,
                std::size_t k, double* out);
}  // namespace avx2
#endif

#if defined(ANCHOR_HAVE_NEON_KERNELS)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
double diff_squared_norm(const double* a, const double* b, std::size_t n);
void cross_gram(const double* a, std::size_t da, const double* b, std::size_t db,
                std::size_t n, double* out);
void gram(const double* a, std::size_t d, std::size_t n, double* out);
void matmul_abt(const double* a, std::size_t ra, const double* b, std::size_t rb,
                std::size_t k, double* out);
}  // namespace neon
#endif

}  // namespace anchor::kernels
