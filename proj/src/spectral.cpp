#include "anchor/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace anchor {

namespace {

// Two eigenvalues closer than this are treated as one degenerate block for
// the deterministic column ordering.
constexpr double kTieTolerance = 1e-12;

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (v(best) < 0.0) v = -v;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

}  // namespace

double auto_sigma(const DistanceMatrix& m) {
  validate_distance_matrix(m);
  std::vector<double> off;
  const Index n = m.values.rows();
  off.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) off.push_back(m.values(i, j));
    }
  }
  std::sort(off.begin(), off.end());
  const std::size_t mid = off.size() / 2;
  const double median =
      off.size() % 2 == 1 ? off[mid] : 0.5 * (off[mid - 1] + off[mid]);
  if (median <= 0.0) {
    throw DegenerateDataError("auto sigma: median off-diagonal distance is 0");
  }
  return median;
}

LaplacianPair similarity_from_distance(const DistanceMatrix& m, std::optional<double> sigma) {
  validate_distance_matrix(m);
  double s = sigma.value_or(0.0);
  if (sigma.has_value()) {
    if (!(s > 0.0)) throw std::invalid_argument("sigma must be positive");
  } else {
    s = auto_sigma(m);
  }

  const Index n = m.values.rows();
  const double inv = 1.0 / (2.0 * s * s);
  LaplacianPair out;
  // Entry-wise std::exp over the upper triangle, mirrored: S is bitwise
  // symmetric even when M carries sub-tolerance asymmetry.
  out.similarity = RowMatrix(n, n);
  for (Index i = 0; i < n; ++i) {
    out.similarity(i, i) = std::exp(-inv * m.values(i, i));
    for (Index j = i + 1; j < n; ++j) {
      const double v = std::exp(-inv * m.values(i, j));
      out.similarity(i, j) = v;
      out.similarity(j, i) = v;
    }
  }

  Eigen::VectorXd inv_sqrt_degree(n);
  for (Index i = 0; i < n; ++i) inv_sqrt_degree(i) = 1.0 / std::sqrt(out.similarity.row(i).sum());

  // Filled upper-triangle first and mirrored, so L is bitwise symmetric.
  out.laplacian = RowMatrix(n, n);
  for (Index i = 0; i < n; ++i) {
    out.laplacian(i, i) = 1.0 - out.similarity(i, i) * inv_sqrt_degree(i) * inv_sqrt_degree(i);
    for (Index j = i + 1; j < n; ++j) {
      const double v = -(out.similarity(i, j) * inv_sqrt_degree(i) * inv_sqrt_degree(j));
      out.laplacian(i, j) = v;
      out.laplacian(j, i) = v;
    }
  }
  return out;
}

SpectralCoordinates laplacian_embedding(const DistanceMatrix& m, Index k,
                                        std::optional<double> sigma, bool skip_trivial) {
  const Index n = m.values.rows();
  const Index available = skip_trivial ? n - 1 : n;
  if (k < 1 || k > available) {
    throw std::invalid_argument("k = " + std::to_string(k) + " out of range [1, " +
                                std::to_string(available) + "]" +
                                (skip_trivial ? " (skip_trivial drops one direction)" : ""));
  }

  const double sigma_used = sigma.has_value() ? *sigma : auto_sigma(m);
  LaplacianPair pair = similarity_from_distance(m, sigma_used);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(pair.laplacian);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of the Laplacian did not converge");
  }
  const Eigen::VectorXd& eigenvalues = solver.eigenvalues();  // ascending
  Eigen::MatrixXd vectors = solver.eigenvectors();

  for (Index c = 0; c < n; ++c) canonicalize_sign(vectors.col(c));

  // Deterministic order inside numerically degenerate eigenvalue blocks.
  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && eigenvalues(end) - eigenvalues(start) <= kTieTolerance) ++end;
    if (end - start > 1) {
      std::vector<Index> order(static_cast<std::size_t>(end - start));
      for (Index i = 0; i < end - start; ++i) order[static_cast<std::size_t>(i)] = start + i;
      std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return lex_less(vectors.col(a), vectors.col(b));
      });
      Eigen::MatrixXd block(n, end - start);
      for (Index i = 0; i < end - start; ++i) block.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
      vectors.block(0, start, n, end - start) = block;
    }
    start = end;
  }

  SpectralCoordinates coords;
  coords.labels = m.labels;
  coords.sigma = sigma_used;
  coords.k = k;
  coords.coords = RowMatrix(n, k);
  const Index first = skip_trivial ? 1 : 0;
  for (Index c = 0; c < k; ++c) coords.coords.col(c) = vectors.col(first + c);
  return coords;
}

}  // namespace anchor
