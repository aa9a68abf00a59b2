#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "anchor/random.hpp"
#include "anchor/spectral.hpp"

using namespace anchor;

namespace {

DistanceMatrix from_points(const std::vector<double>& xs) {
  DistanceMatrix m;
  const Index n = static_cast<Index>(xs.size());
  m.values = RowMatrix(n, n);
  for (Index i = 0; i < n; ++i) {
    m.labels.push_back("p" + std::to_string(i));
    for (Index j = 0; j < n; ++j) {
      m.values(i, j) = std::abs(xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)]);
    }
  }
  return m;
}

DistanceMatrix two_clusters() {
  DistanceMatrix m;
  m.values = RowMatrix::Constant(6, 6, 5.0);
  m.values.topLeftCorner(3, 3).setConstant(0.1);
  m.values.bottomRightCorner(3, 3).setConstant(0.1);
  m.values.diagonal().setZero();
  for (Index i = 0; i < 6; ++i) m.labels.push_back("c" + std::to_string(i));
  return m;
}

}  // namespace

TEST_CASE("auto_sigma is the median off-diagonal distance") {
  const auto m = from_points({0.0, 1.0, 2.0, 3.0, 4.0});
  // off-diagonal distances: 1 x4, 2 x3, 3 x2, 4 x1 (each twice) -> median 2
  CHECK(auto_sigma(m) == 2.0);

  const auto zero = from_points({1.0, 1.0, 1.0});
  CHECK_THROWS_AS(auto_sigma(zero), DegenerateDataError);
}

TEST_CASE("similarity_from_distance") {
  SUBCASE("all-zero distances give the complete graph") {
    auto m = from_points({0.0, 0.0, 0.0});
    const auto pair = similarity_from_distance(m, 1.0);
    CHECK(pair.similarity.minCoeff() == 1.0);
    CHECK(pair.similarity.maxCoeff() == 1.0);
    // L = I - J/3
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < 3; ++j) {
        const double want = (i == j ? 1.0 : 0.0) - 1.0 / 3.0;
        CHECK(std::abs(pair.laplacian(i, j) - want) <= 1e-15);
      }
    }
  }

  SUBCASE("distance 2 sigma^2 maps to exp(-1)") {
    auto m = from_points({0.0, 2.0});  // off-diagonal 2 = 2 * 1^2
    const auto pair = similarity_from_distance(m, 1.0);
    CHECK(pair.similarity(0, 1) == std::exp(-1.0));
    CHECK(pair.similarity(0, 0) == 1.0);
  }

  SUBCASE("3x3 instance matches the step-by-step hand computation") {
    const auto m = from_points({0.0, 1.0, 2.0});
    const auto pair = similarity_from_distance(m, 1.0);
    // S_ij = exp(-M_ij / 2)
    CHECK(pair.similarity(0, 1) == doctest::Approx(0.6065306597126334).epsilon(1e-15));
    CHECK(pair.similarity(0, 2) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    // row sums: 1.9744101008840758, 2.213061319425267, and the first again
    // L = I - D^{-1/2} S D^{-1/2}, evaluated entry by entry
    CHECK(std::abs(pair.laplacian(0, 0) - 0.493519608944346) <= 5e-15);
    CHECK(std::abs(pair.laplacian(0, 1) - -0.2901598734838264) <= 5e-15);
    CHECK(std::abs(pair.laplacian(0, 2) - -0.1863237232258476) <= 5e-15);
    CHECK(std::abs(pair.laplacian(1, 1) - 0.5481372381223939) <= 5e-15);
    // bitwise symmetric by construction
    CHECK(pair.laplacian == RowMatrix(pair.laplacian.transpose()));
  }

  SUBCASE("similarity entries lie in (0,1] with unit diagonal") {
    auto rng = trial_rng(42);
    std::vector<double> xs;
    for (int i = 0; i < 8; ++i) xs.push_back(10.0 * uniform01(rng));
    const auto pair = similarity_from_distance(from_points(xs));
    CHECK(pair.similarity.minCoeff() > 0.0);
    CHECK(pair.similarity.maxCoeff() <= 1.0);
    CHECK(pair.similarity.diagonal().minCoeff() == 1.0);
  }

  SUBCASE("laplacian is PSD with spectrum in [0,2] and kernel D^{1/2} 1") {
    auto rng = trial_rng(43);
    std::vector<double> xs;
    for (int i = 0; i < 9; ++i) xs.push_back(5.0 * uniform01(rng));
    const auto m = from_points(xs);
    const auto pair = similarity_from_distance(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(pair.laplacian);
    REQUIRE(solver.info() == Eigen::Success);
    CHECK(solver.eigenvalues().minCoeff() >= -1e-9);
    CHECK(solver.eigenvalues().maxCoeff() <= 2.0 + 1e-9);
    CHECK(std::abs(solver.eigenvalues().minCoeff()) <= 1e-9);

    Eigen::VectorXd v(m.values.rows());
    for (Index i = 0; i < v.size(); ++i) v(i) = std::sqrt(pair.similarity.row(i).sum());
    CHECK((pair.laplacian * v).norm() <= 1e-8 * v.norm());
  }

  SUBCASE("sigma must be positive") {
    const auto m = from_points({0.0, 1.0});
    CHECK_THROWS_AS(similarity_from_distance(m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(similarity_from_distance(m, -1.0), std::invalid_argument);
  }
}

TEST_CASE("laplacian_embedding") {
  SUBCASE("all-zero distances embed into the constant null direction") {
    auto m = from_points({0.0, 0.0, 0.0, 0.0});
    const auto coords = laplacian_embedding(m, 1, 1.0, false);
    REQUIRE(coords.coords.rows() == 4);
    REQUIRE(coords.coords.cols() == 1);
    for (Index i = 0; i < 4; ++i) {
      CHECK(coords.coords(i, 0) > 0.0);  // sign convention
      CHECK(std::abs(coords.coords(i, 0) - coords.coords(0, 0)) <= 1e-12);
    }
    CHECK(coords.sigma == 1.0);
    CHECK(coords.k == 1);
  }

  SUBCASE("five collinear points embed monotonically") {
    const std::vector<double> xs = {0.0, 1.0, 2.0, 3.0, 4.0};
    const auto m = from_points(xs);
    const auto coords = laplacian_embedding(m, 1, std::nullopt, true);
    REQUIRE(coords.coords.rows() == 5);
    bool increasing = true, decreasing = true;
    for (Index i = 1; i < 5; ++i) {
      increasing = increasing && coords.coords(i, 0) > coords.coords(i - 1, 0);
      decreasing = decreasing && coords.coords(i, 0) < coords.coords(i - 1, 0);
    }
    CHECK((increasing || decreasing));

    // independent spectral oracle on the same instance
    const double sigma = 2.0;  // median off-diagonal distance
    Eigen::MatrixXd s(5, 5);
    for (Index i = 0; i < 5; ++i) {
      for (Index j = 0; j < 5; ++j) {
        s(i, j) = std::exp(-m.values(i, j) / (2.0 * sigma * sigma));
      }
    }
    Eigen::VectorXd d = s.rowwise().sum();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(5, 5);
    for (Index i = 0; i < 5; ++i) {
      for (Index j = 0; j < 5; ++j) {
        lap(i, j) -= s(i, j) / std::sqrt(d(i) * d(j));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    Eigen::VectorXd fiedler = solver.eigenvectors().col(1);
    // compare up to global sign: this vector's two largest magnitudes tie,
    // so the sign conventions of the two computations may disagree
    if (fiedler.dot(coords.coords.col(0)) < 0.0) fiedler = -fiedler;
    for (Index i = 0; i < 5; ++i) CHECK(std::abs(coords.coords(i, 0) - fiedler(i)) <= 1e-9);
  }

  SUBCASE("two clusters separate by sign in the leading nontrivial coordinate") {
    const auto m = two_clusters();
    const auto coords = laplacian_embedding(m, 2, std::nullopt, false);
    const auto lead = coords.coords.col(1);  // column 0 is the trivial direction
    CHECK(lead.head(3).maxCoeff() * lead.head(3).minCoeff() > 0.0);
    CHECK(lead.tail(3).maxCoeff() * lead.tail(3).minCoeff() > 0.0);
    CHECK(lead(0) * lead(3) < 0.0);

    // with the trivial direction dropped the separator leads
    const auto skipped = laplacian_embedding(m, 2, std::nullopt, true);
    CHECK(skipped.coords.col(0) == coords.coords.col(1));

    // the clusters are exactly recovered by proximity on the k=2
    // coordinates (trivial + separator)
    double max_within = 0.0, min_across = 1e300;
    for (Index i = 0; i < 6; ++i) {
      for (Index j = i + 1; j < 6; ++j) {
        const double dist = (coords.coords.row(i) - coords.coords.row(j)).norm();
        if ((i < 3) == (j < 3)) max_within = std::max(max_within, dist);
        else min_across = std::min(min_across, dist);
      }
    }
    CHECK(max_within < min_across);
  }

  SUBCASE("coordinate columns are orthonormal") {
    auto rng = trial_rng(44);
    std::vector<double> xs;
    for (int i = 0; i < 7; ++i) xs.push_back(3.0 * uniform01(rng));
    const auto coords = laplacian_embedding(from_points(xs), 3, std::nullopt, true);
    const Eigen::MatrixXd gram = coords.coords.transpose() * coords.coords;
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-8);
  }

  SUBCASE("relabeling permutes coordinate rows identically") {
    auto rng = trial_rng(45);
    std::vector<double> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(4.0 * uniform01(rng));
    const auto m = from_points(xs);
    const std::vector<Index> perm = {3, 0, 5, 1, 4, 2};
    DistanceMatrix permuted;
    permuted.values = RowMatrix(6, 6);
    for (Index i = 0; i < 6; ++i) {
      permuted.labels.push_back(m.labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
      for (Index j = 0; j < 6; ++j) {
        permuted.values(i, j) = m.values(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
      }
    }
    const auto base = laplacian_embedding(m, 2, 1.0, true);
    const auto moved = laplacian_embedding(permuted, 2, 1.0, true);
    for (Index i = 0; i < 6; ++i) {
      for (Index j = 0; j < 2; ++j) {
        CHECK(std::abs(moved.coords(i, j) - base.coords(perm[static_cast<std::size_t>(i)], j)) <= 1e-9);
      }
    }
  }

  SUBCASE("quadrupled distances with doubled sigma give bitwise identical output") {
    auto rng = trial_rng(46);
    std::vector<double> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(2.0 * uniform01(rng));
    const auto m = from_points(xs);
    DistanceMatrix scaled = m;
    scaled.values *= 4.0;
    const auto base = laplacian_embedding(m, 2, 1.5, true);
    const auto big = laplacian_embedding(scaled, 2, 3.0, true);
    CHECK(base.coords == big.coords);
  }

  SUBCASE("k validation") {
    const auto m = from_points({0.0, 1.0, 2.0});
    CHECK_THROWS_AS(laplacian_embedding(m, 0, 1.0, false), std::invalid_argument);
    CHECK_THROWS_AS(laplacian_embedding(m, 4, 1.0, false), std::invalid_argument);
    CHECK_THROWS_AS(laplacian_embedding(m, 3, 1.0, true), std::invalid_argument);
    CHECK_NOTHROW(laplacian_embedding(m, 3, 1.0, false));
    CHECK_NOTHROW(laplacian_embedding(m, 2, 1.0, true));
  }
}
