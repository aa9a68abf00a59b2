#include "anchor/subspace.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "anchor/kernels.hpp"

namespace anchor {

namespace {

constexpr double kRankThreshold = 1e-10;

// Cosines within this of 1 are treated as exactly 1. arccos amplifies
// rounding near 1 into spurious angles of order 1e-8; angles below the
// corresponding resolution (~4e-7 rad) are indistinguishable from 0 anyway,
// and snapping makes identical subspaces report an exactly zero spectrum.
constexpr double kCosineSnap = 1e-12;

Eigen::BDCSVD<Eigen::MatrixXd> svd_of(const RowMatrix& m, unsigned options) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, options);
  if (svd.info() != Eigen::Success) throw NumericError("SVD did not converge");
  return svd;
}

}  // namespace

double PrincipalAngleSpectrum::sine_norm() const {
  return std::sqrt(kernels::squared_norm(sines.data(), sines.size()));
}

double PrincipalAngleSpectrum::half_sine_norm() const {
  double acc = 0.0;
  for (const double theta : angles) {
    const double s = std::sin(theta / 2.0);
    acc += s * s;
  }
  return std::sqrt(acc);
}

RowMatrix orthonormalize(const RowMatrix& m) {
  if (m.rows() < m.cols()) {
    throw std::invalid_argument("orthonormalize: need at least as many rows as columns");
  }
  const auto svd = svd_of(m, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  if (sigma(0) == 0.0 || sigma(sigma.size() - 1) / sigma(0) <= kRankThreshold) {
    throw DegenerateDataError("orthonormalize: rank-deficient input (relative sigma_min " +
                              std::to_string(sigma(0) == 0.0 ? 0.0 : sigma(sigma.size() - 1) / sigma(0)) +
                              ")");
  }
  return svd.matrixU();
}

PrincipalAngleSpectrum principal_angles(const RowMatrix& e, const RowMatrix& f) {
  if (e.rows() != f.rows()) {
    throw std::invalid_argument("principal_angles: row counts differ (" +
                                std::to_string(e.rows()) + " vs " + std::to_string(f.rows()) + ")");
  }
  RowMatrix cross(e.cols(), f.cols());
  kernels::cross_gram(e.data(), static_cast<std::size_t>(e.cols()), f.data(),
                      static_cast<std::size_t>(f.cols()), static_cast<std::size_t>(e.rows()),
                      cross.data());
  const auto svd = svd_of(cross, 0);
  const auto& sigma = svd.singularValues();  // descending, so angles ascend

  PrincipalAngleSpectrum spectrum;
  const std::size_t count = static_cast<std::size_t>(sigma.size());
  spectrum.angles.resize(count);
  spectrum.cosines.resize(count);
  spectrum.sines.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    double c = std::clamp(sigma(static_cast<Index>(i)), 0.0, 1.0);
    if (c >= 1.0 - kCosineSnap) c = 1.0;
    const double theta = std::acos(c);
    spectrum.angles[i] = theta;
    spectrum.cosines[i] = c;
    spectrum.sines[i] = std::sin(theta);
  }
  return spectrum;
}

AlignmentResult procrustes(const RowMatrix& e, const RowMatrix& f) {
  if (e.cols() != f.cols()) throw DimensionMismatchError(e.cols(), f.cols());
  if (e.rows() != f.rows()) {
    throw std::invalid_argument("procrustes: row counts differ (" + std::to_string(e.rows()) +
                                " vs " + std::to_string(f.rows()) + ")");
  }
  const std::size_t d = static_cast<std::size_t>(e.cols());
  RowMatrix cross(e.cols(), f.cols());
  kernels::cross_gram(e.data(), d, f.data(), d, static_cast<std::size_t>(e.rows()), cross.data());

  const auto svd = svd_of(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RowMatrix rotation = svd.matrixV() * svd.matrixU().transpose();

  const RowMatrix aligned = f * rotation;
  const double residual = std::sqrt(kernels::diff_squared_norm(
      e.data(), aligned.data(), static_cast<std::size_t>(e.size())));
  return AlignmentResult{std::move(rotation), residual};
}

AlignmentResult procrustes(const AlignedPair& pair) {
  return procrustes(pair.left.matrix, pair.right.matrix);
}

}  // namespace anchor
