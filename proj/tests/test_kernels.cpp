#include <doctest.h>

#include <cmath>
#include <vector>

#include "anchor/kernels.hpp"
#include "anchor/random.hpp"

using namespace anchor;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = normal01(rng);
  return v;
}

// Error model for comparing two summation orders of the same product sum.
double dot_tolerance(const std::vector<double>& a, const std::vector<double>& b) {
  double mass = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) mass += std::abs(a[i] * b[i]);
  return 1e-12 * mass;
}

}  // namespace

TEST_CASE("scalar kernels: hand values") {
  const double a[3] = {1.0, 2.0, 3.0};
  const double b[3] = {4.0, 5.0, 6.0};
  CHECK(kernels::scalar::dot(a, b, 3) == 32.0);
  CHECK(kernels::scalar::squared_norm(a, 3) == 14.0);
  CHECK(kernels::scalar::diff_squared_norm(a, b, 3) == 27.0);
  CHECK(kernels::scalar::dot(a, b, 0) == 0.0);

  // A = [[1,2],[3,4]]: A^T A = [[10,14],[14,20]], A A^T = [[5,11],[11,25]]
  const double m[4] = {1.0, 2.0, 3.0, 4.0};
  double g[4];
  kernels::scalar::gram(m, 2, 2, g);
  CHECK(g[0] == 10.0);
  CHECK(g[1] == 14.0);
  CHECK(g[2] == 14.0);
  CHECK(g[3] == 20.0);
  double p[4];
  kernels::scalar::matmul_abt(m, 2, m, 2, 2, p);
  CHECK(p[0] == 5.0);
  CHECK(p[1] == 11.0);
  CHECK(p[2] == 11.0);
  CHECK(p[3] == 25.0);
}

TEST_CASE("gram is bitwise symmetric and equals cross_gram with itself") {
  auto rng = trial_rng(7);
  const std::size_t n = 37, d = 5;
  const auto a = random_vector(n * d, rng);
  std::vector<double> g(d * d), c(d * d);
  kernels::gram(a.data(), d, n, g.data());
  kernels::cross_gram(a.data(), d, a.data(), d, n, c.data());
  for (std::size_t i = 0; i < d * d; ++i) CHECK(g[i] == c[i]);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) CHECK(g[i * d + j] == g[j * d + i]);
  }
}

#if defined(ANCHOR_HAVE_AVX2_KERNELS)
TEST_CASE("avx2 kernels match scalar reference") {
  if (!kernels::backend_supported(kernels::Backend::avx2)) {
    MESSAGE("avx2 not supported on this CPU; skipping");
    return;
  }
  auto rng = trial_rng(11);
  for (const std::size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 8ul, 9ul, 31ul, 64ul, 1000ul, 4097ul}) {
    const auto a = random_vector(n, rng);
    const auto b = random_vector(n, rng);
    const double tol = dot_tolerance(a, b);
    CHECK(std::abs(kernels::avx2::dot(a.data(), b.data(), n) -
                   kernels::scalar::dot(a.data(), b.data(), n)) <= tol);
    CHECK(std::abs(kernels::avx2::squared_norm(a.data(), n) -
                   kernels::scalar::squared_norm(a.data(), n)) <= tol);
    CHECK(std::abs(kernels::avx2::diff_squared_norm(a.data(), b.data(), n) -
                   kernels::scalar::diff_squared_norm(a.data(), b.data(), n)) <= 4.0 * tol);
  }

  for (const auto [n, da, db] : {std::array<std::size_t, 3>{5, 3, 4},
                                 std::array<std::size_t, 3>{64, 7, 9},
                                 std::array<std::size_t, 3>{200, 16, 5}}) {
    const auto a = random_vector(n * da, rng);
    const auto b = random_vector(n * db, rng);
    std::vector<double> ref(da * db), simd(da * db);
    kernels::scalar::cross_gram(a.data(), da, b.data(), db, n, ref.data());
    kernels::avx2::cross_gram(a.data(), da, b.data(), db, n, simd.data());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(std::abs(ref[i] - simd[i]) <= 1e-12 * (1.0 + std::abs(ref[i])) * n);
    }

    std::vector<double> pref(n * n), psimd(n * n);
    kernels::scalar::matmul_abt(a.data(), n, a.data(), n, da, pref.data());
    kernels::avx2::matmul_abt(a.data(), n, a.data(), n, da, psimd.data());
    for (std::size_t i = 0; i < pref.size(); ++i) {
      CHECK(std::abs(pref[i] - psimd[i]) <= 1e-12 * (1.0 + std::abs(pref[i])) * da);
    }
  }
}
#endif

TEST_CASE("backend selection") {
  const auto original = kernels::active_backend();
  CHECK(kernels::backend_supported(kernels::Backend::scalar));
  CHECK(kernels::set_active_backend(kernels::Backend::scalar));
  CHECK(kernels::active_backend() == kernels::Backend::scalar);

  const double a[5] = {1, 2, 3, 4, 5};
  CHECK(kernels::dot(a, a, 5) == 55.0);

  CHECK(kernels::set_active_backend(original));
  CHECK(kernels::backend_name(kernels::Backend::scalar) == "scalar");
  CHECK(kernels::backend_name(kernels::Backend::avx2) == "avx2");
}
