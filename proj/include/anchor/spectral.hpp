#pragma once

//
// Laplacian embedding of a distance matrix.
//
// The similarity kernel is S = exp(-M / (2 sigma^2)) element-wise — linear
// in the distance, not squared. L = I - D^{-1/2} S D^{-1/2} with
// D = diag(row sums of S). Coordinates are the eigenvector columns of L
// for the smallest eigenvalues, ascending left to right; the zero-
// eigenvalue direction D^{1/2} 1 can optionally be dropped.
//

#include <optional>
#include <string>
#include <vector>

#include "anchor/metrics.hpp"
#include "anchor/types.hpp"

namespace anchor {

// S symmetric with unit diagonal and entries in (0, 1]; L symmetric PSD
// with eigenvalues in [0, 2] and smallest eigenvalue 0.
struct LaplacianPair {
  RowMatrix similarity;
  RowMatrix laplacian;
};

struct SpectralCoordinates {
  std::vector<std::string> labels;
  RowMatrix coords;  // m x k, orthonormal columns
  double sigma;      // kernel width actually used
  Index k;
};

// Median of the strictly-off-diagonal entries of M; the default sigma.
// Throws DegenerateDataError when that median is 0 (all-identical corpora).
double auto_sigma(const DistanceMatrix& m);

// sigma = nullopt selects auto_sigma(m).
LaplacianPair similarity_from_distance(const DistanceMatrix& m,
                                       std::optional<double> sigma = std::nullopt);

// Eigenvector columns for the k smallest eigenvalues of L (for symmetric
// PSD L these are its smallest singular directions). Deterministic sign
// convention: each column's largest-magnitude entry is made positive.
// Columns inside a numerically tied eigenvalue block are ordered by
// lexicographic comparison of the sign-fixed vectors. skip_trivial drops
// the zero-eigenvalue direction before taking k columns (k <= m-1 then).
SpectralCoordinates laplacian_embedding(const DistanceMatrix& m, Index k,
                                        std::optional<double> sigma = std::nullopt,
                                        bool skip_trivial = false);

}  // namespace anchor
