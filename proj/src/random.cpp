#include "anchor/random.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>

#include "anchor/embedding.hpp"

namespace anchor {

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal01(std::mt19937_64& rng) {
  // Box-Muller, cosine branch only. The transform is spelled out (rather
  // than std::normal_distribution) so streams are identical across
  // standard libraries.
  double u1 = uniform01(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RowMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  RowMatrix m(rows, cols);
  double* p = m.data();
  const std::size_t total = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  for (std::size_t i = 0; i < total; ++i) p[i] = normal01(rng);
  return m;
}

RowMatrix random_orthogonal(Index dim, std::mt19937_64& rng) {
  const RowMatrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the sign ambiguity so Q is Haar-distributed.
  for (Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

EmbeddingMatrix synthetic_embedding(Index rows, Index cols, const std::string& label,
                                    std::mt19937_64& rng) {
  EmbeddingMatrix e;
  e.label = label;
  e.matrix = gaussian_matrix(rows, cols, rng);
  e.vocab.reserve(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "w%06lld", static_cast<long long>(i));
    e.vocab.emplace_back(buf);
  }
  return e;
}

}  // namespace anchor
