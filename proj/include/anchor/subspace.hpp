#pragma once

//
// Column-space geometry: orthonormalization, principal angles between
// subspaces, and the analytic orthogonal-Procrustes alignment.
//
// All functions are pure and safe to call concurrently.
//

#include <vector>

#include "anchor/embedding.hpp"
#include "anchor/types.hpp"

namespace anchor {

// Principal angles between two column subspaces: the arccos of the clamped
// singular values of E^T F for column-orthonormal E, F. Angles ascend and
// lie in [0, pi/2]; cosines/sines are taken element-wise.
struct PrincipalAngleSpectrum {
  std::vector<double> angles;
  std::vector<double> cosines;
  std::vector<double> sines;

  // sqrt(sum sin(theta_i)^2) and sqrt(sum sin(theta_i/2)^2)
  double sine_norm() const;
  double half_sine_norm() const;
};

// Optimal orthogonal alignment of a pair: rotation Q* = V U^T from
// SVD(E^T F) = U S V^T, and the residual ||E - F Q*||_F. Q* ranges over
// the full orthogonal group; reflections (det = -1) are allowed.
struct AlignmentResult {
  RowMatrix rotation;
  double residual;
};

// Orthonormal basis (n x d) of the column space of `m`, via thin SVD.
// Throws DegenerateDataError when sigma_min/sigma_max <= 1e-10.
RowMatrix orthonormalize(const RowMatrix& m);

// Requires column-orthonormal inputs with equal row counts (the
// orthonormality itself is a precondition and is not re-verified).
PrincipalAngleSpectrum principal_angles(const RowMatrix& e, const RowMatrix& f);

// Requires equal dimensionalities; throws DimensionMismatchError otherwise.
AlignmentResult procrustes(const RowMatrix& e, const RowMatrix& f);
AlignmentResult procrustes(const AlignedPair& pair);

}  // namespace anchor
