// Copyright 2026 The qreservoir Authors
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

#include <gtest/gtest.h>

#include <cmath>

#include "qres/error.hpp"
#include "qres/observables.hpp"
#include "qres/tomography.hpp"
#include "test_util.hpp"

namespace qres {
namespace {

OperatorMatrix diag_op(std::vector<double> d) {
  const int n = d.size() == 2 ? 1 : 2;
  Matrix m = Matrix::Zero(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return {SpaceLayout::qubits(n), m};
}

double min_eig(const Matrix& m) { return Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff(); }

TEST(MleProject, PsdInputIsUnchanged) {
  std::mt19937_64 rng(3);
  const Matrix rho = test::random_density(4, rng);
  const DensityMatrix out = mle_project({SpaceLayout::qubits(2), rho});
  EXPECT_LT((out.matrix() - rho).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MleProject, TwoByTwoOracle) {
  const DensityMatrix out = mle_project(diag_op({1.2, -0.2}));
  EXPECT_NEAR(out.matrix()(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(out.matrix()(1, 1).real(), 0.0, 1e-12);
}

TEST(MleProject, FourByFourOracle) {
  const DensityMatrix out = mle_project(diag_op({0.7, 0.5, -0.1, -0.1}));
  const std::vector<double> want{0.6, 0.4, 0.0, 0.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(out.matrix()(i, i).real(), want[i], 1e-12);
  EXPECT_NEAR(out.matrix().cwiseAbs().sum(), 1.0, 1e-12);
}

TEST(MleProject, IdempotentPsdUnitTrace) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    Matrix h = test::random_hermitian(4, rng);
    h += (1.0 - h.trace().real()) / 4.0 * Matrix::Identity(4, 4);
    const DensityMatrix once = mle_project({SpaceLayout::qubits(2), h});
    const DensityMatrix twice = mle_project(once.op());
    EXPECT_GE(min_eig(once.matrix()), -1e-10);
    EXPECT_NEAR(once.matrix().trace().real(), 1.0, 1e-10);
    EXPECT_LT((twice.matrix() - once.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MleProject, FrobeniusFirstOrderOptimality) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    Matrix h = test::random_hermitian(4, rng);
    h += (1.0 - h.trace().real()) / 4.0 * Matrix::Identity(4, 4);
    const Matrix p = mle_project({SpaceLayout::qubits(2), h}).matrix();
    const double base = (p - h).norm();
    for (int j = 0; j < 10; ++j) {
      const Matrix tau = test::random_density(4, rng);
      for (double t : {1e-3, 1e-2, 1e-1}) EXPECT_GE(((1.0 - t) * p + t * tau - h).norm(), base - 1e-8);
    }
  }
}

TEST(MleProject, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 0.3;
  EXPECT_THROW(mle_project({SpaceLayout::qubits(1), m}), Error);
}

TEST(PauliExpectations, ExactPathOnRandomState) {
  std::mt19937_64 rng(6);
  const Matrix rho = test::random_density(4, rng);
  const auto e = measure_pauli_expectations(rho, 0, {}, AssignmentMatrix::ideal(2), 1);
  ASSERT_EQ(e.size(), 16u);
  for (const auto& [word, v] : e) EXPECT_NEAR(v, (pauli_operator(word) * rho).trace().real(), 1e-10) << word;
  const TomographyResult r = reconstruct(e);
  EXPECT_LT((r.rho_linear.matrix() - rho).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(r.method, "eigenvalue-truncation");
}

TEST(PauliExpectations, ReadoutMitigationIsExactInTheLimit) {
  std::mt19937_64 rng(7);
  const Matrix rho = test::random_density(4, rng);
  const auto e = measure_pauli_expectations(rho, 0, {}, AssignmentMatrix::symmetric(2, 0.016), 1);
  for (const auto& [word, v] : e) EXPECT_NEAR(v, (pauli_operator(word) * rho).trace().real(), 1e-10) << word;
}

TEST(PauliExpectations, XStateAntiCorrelatedY) {
  const Matrix rho_x = (Matrix::Identity(4, 4) - pauli_operator("YY")) / 4.0;
  const auto e = measure_pauli_expectations(rho_x, 9000, {0.02, 0.003}, AssignmentMatrix::symmetric(2, 0.016), 11);
  EXPECT_NEAR(e.at("YY"), -1.0, 0.03);
  EXPECT_NEAR(e.at("XX"), 0.0, 0.05);
  EXPECT_EQ(e.at("II"), 1.0);
}

TEST(PauliExpectations, SampledReconstructionIsPhysical) {
  const Matrix rho = test::projector(psi_minus({}));
  const TomographyResult r =
      reconstruct(measure_pauli_expectations(rho, 1000, {}, AssignmentMatrix::ideal(2), 12));
  EXPECT_GE(min_eig(r.rho_mle.matrix()), -1e-10);
  EXPECT_NEAR(r.rho_mle.matrix().trace().real(), 1.0, 1e-10);
  EXPECT_GT(fidelity_to_pure(r.rho_mle, psi_minus({})), 0.95);
}

TEST(PauliExpectations, MeasurementGateMapping) {
  EXPECT_EQ(measurement_gate('Z'), Gate::kId);
  EXPECT_EQ(measurement_sign(Gate::kId, 'Z'), 1);
  EXPECT_THROW(measurement_gate('Q'), Error);
}

}  // namespace
}  // namespace qres
