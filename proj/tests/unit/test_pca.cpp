// Copyright 2026 The lotdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>

#include <Eigen/Dense>

#include "core/errors.hpp"
#include "core/pca.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace lotdepth;

namespace {

// Full covariance eigenvalues, descending, straight from Eigen's dense solver.
Eigen::VectorXd FullSpectrum(const Eigen::MatrixXd& data) {
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd c = data.rowwise() - mean;
  const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(data.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  return es.eigenvalues().reverse();
}

}  // namespace

TEST_CASE("PCA on identical vectors") {
  Eigen::MatrixXd data = Eigen::MatrixXd::Ones(5, 6);
  const auto m = FitPca(data, 2);
  CHECK(m.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(Project(data.row(i).transpose(), m).norm() == 0.0);
  CHECK((m.basis.transpose() * m.basis - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-9);
}

TEST_CASE("PCA on a line has zero residual") {
  const Eigen::MatrixXd g = testutil::GaussianMatrix(8, 1, 1);
  Eigen::VectorXd dir = testutil::GaussianMatrix(10, 1, 2).col(0).normalized();
  Eigen::MatrixXd data = g * dir.transpose();
  data.rowwise() += testutil::GaussianMatrix(1, 10, 3).row(0);
  const auto m = FitPca(data, 1);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    CHECK(ResidualDistance(data.row(i).transpose(), m) < 1e-9);
  }
}

TEST_CASE("PCA eigenvalues match a dense full eigendecomposition") {
  for (auto [n, p] : {std::pair{30, 12}, std::pair{8, 40}}) {
    const Eigen::MatrixXd data = testutil::GaussianMatrix(n, p, n * 7 + p);
    const auto m = FitPca(data, 3);
    const Eigen::VectorXd full = FullSpectrum(data);
    for (int k = 0; k < 3; ++k) CHECK(std::fabs(m.eigenvalues[k] - full[k]) < 1e-8);
    CHECK(std::fabs(m.total_variance - full.sum()) < 1e-8);
    CHECK((m.basis.transpose() * m.basis - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-9);
    for (int k = 1; k < 3; ++k) CHECK(m.eigenvalues[k] <= m.eigenvalues[k - 1]);
    // Sign convention: largest-magnitude coordinate of each column positive.
    for (int k = 0; k < 3; ++k) {
      Eigen::Index arg;
      m.basis.col(k).cwiseAbs().maxCoeff(&arg);
      CHECK(m.basis(arg, k) > 0.0);
    }
  }
}

TEST_CASE("PCA argument checks") {
  const Eigen::MatrixXd data = testutil::GaussianMatrix(5, 4, 9);
  CHECK_THROWS_AS(FitPca(data, 0), ArgumentError);
  CHECK_THROWS_AS(FitPca(data, 9), ArgumentError);
  CHECK_THROWS_AS(FitPca(data.topRows(1), 1), ArgumentError);
}

TEST_CASE("Projection and reconstruction") {
  const Eigen::MatrixXd data = testutil::GaussianMatrix(12, 6, 21);
  SUBCASE("mean projects to zero and reconstructs from zero") {
    const auto m = FitPca(data, 2);
    CHECK(Project(m.mean, m).norm() < 1e-12);
    CHECK((Reconstruct(Eigen::VectorXd::Zero(2), m) - m.mean).norm() == 0.0);
  }
  SUBCASE("full dimension is an isometry and round-trips") {
    const auto m = FitPca(data, 6);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const Eigen::VectorXd v = data.row(i).transpose();
      CHECK(std::fabs(Project(v, m).norm() - (v - m.mean).norm()) < 1e-9);
      CHECK((Reconstruct(Project(v, m), m) - v).norm() < 1e-9);
      CHECK(ResidualDistance(v, m) < 1e-9);
    }
  }
  SUBCASE("paper-scaled coordinates are sqrt(lambda) times orthonormal ones") {
    PcaOptions opts;
    opts.convention = PcaConvention::kPaperScaled;
    const auto ms = FitPca(data, 3, opts);
    const auto mo = FitPca(data, 3);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const Eigen::VectorXd v = data.row(i).transpose();
      const Eigen::VectorXd xo = Project(v, mo);
      const Eigen::VectorXd xs = Project(v, ms);
      for (int k = 0; k < 3; ++k) {
        CHECK(std::fabs(xs[k] - std::sqrt(mo.eigenvalues[k]) * xo[k]) < 1e-9);
      }
      // Reconstruction inverts projection within the subspace.
      CHECK((Reconstruct(xs, ms) - Reconstruct(xo, mo)).norm() < 1e-9);
    }
  }
  SUBCASE("paper-scaled reconstruction along a null direction") {
    Eigen::MatrixXd flat = Eigen::MatrixXd::Zero(4, 3);
    flat.col(0) << 1, -1, 2, -2;
    PcaOptions opts;
    opts.convention = PcaConvention::kPaperScaled;
    const auto m = FitPca(flat, 2, opts);
    CHECK(m.eigenvalues[1] == 0.0);
    CHECK_THROWS_AS(Reconstruct(Eigen::Vector2d(0.5, 1.0), m), DegenerateDirectionError);
    CHECK_NOTHROW(Reconstruct(Eigen::Vector2d(0.5, 0.0), m));
  }
  SUBCASE("residual is orthogonal to the basis") {
    const auto m = FitPca(data, 2);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const Eigen::VectorXd v = data.row(i).transpose();
      const Eigen::VectorXd r = v - Reconstruct(Project(v, m), m);
      CHECK((m.basis.transpose() * r).norm() < 1e-9);
      // Pythagoras.
      const double lhs = (v - m.mean).squaredNorm();
      const double rhs = Project(v, m).squaredNorm() + std::pow(ResidualDistance(v, m), 2);
      CHECK(std::fabs(lhs - rhs) < 1e-8);
    }
  }
  SUBCASE("in-subspace points and explicit off-subspace perturbations") {
    const auto m = FitPca(data, 2);
    const Eigen::VectorXd in = m.mean + m.basis * Eigen::Vector2d(1.5, -0.7);
    CHECK(ResidualDistance(in, m) < 1e-12);
    // Orthogonal direction by Gram-Schmidt against the basis.
    Eigen::VectorXd w = testutil::GaussianMatrix(6, 1, 33).col(0);
    w -= m.basis * (m.basis.transpose() * w);
    w.normalize();
    CHECK(std::fabs(ResidualDistance(in + 3.25 * w, m) - 3.25) < 1e-9);
  }
}

TEST_CASE("Weighted PCA and explained variance") {
  const Eigen::MatrixXd data = testutil::GaussianMatrix(10, 4, 41);
  PcaOptions opts;
  opts.weighted = true;
  opts.metric_weights = Eigen::Vector4d(1.0, 2.0, 0.5, 0.0);
  const auto m = FitPca(data, 2, opts);
  CHECK(m.weighted);
  CHECK((m.basis.transpose() * m.basis - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-9);
  const auto full = FitPca(data, 4);
  CHECK(std::fabs(full.ExplainedVarianceRatio().sum() - 1.0) < 1e-9);
  opts.metric_weights = Eigen::Vector3d(1, 1, 1);
  CHECK_THROWS_AS(FitPca(data, 2, opts), ArgumentError);
}
