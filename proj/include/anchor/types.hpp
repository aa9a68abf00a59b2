#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace anchor {

// Word vectors live in rows, so everything downstream assumes row-major
// contiguous storage (one cache-friendly row per word).
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

// Error taxonomy, mirrored by the CLI exit codes:
//   ParseError / std::invalid_argument -> 2 (bad input)
//   DegenerateDataError                -> 3 (well-formed input the method cannot digest)
//   NumericError                       -> 4 (internal numerical failure)

// Malformed input file or option; carries file/line context where available.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input is syntactically valid but degenerate for the requested computation
// (empty vocabulary intersection, all-zero matrix, rank deficiency, ...).
struct DegenerateDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Equal-dimensionality methods applied to unequal dimensionalities.
struct DimensionMismatchError : DegenerateDataError {
  Index left_dim;
  Index right_dim;
  DimensionMismatchError(Index left, Index right)
      : DegenerateDataError("dimension mismatch: " + std::to_string(left) +
                            " vs " + std::to_string(right)),
        left_dim(left),
        right_dim(right) {}
};

// A decomposition failed to converge or produced unusable output.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace anchor
