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
#include <numbers>
#include <sstream>

#include "qres/error.hpp"
#include "qres/measurement_sim.hpp"
#include "qres/observables.hpp"
#include "qres/reservoir_model.hpp"
#include "test_util.hpp"

namespace qres {
namespace {

Matrix gg() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1.0;
  return m;
}

TEST(Settings, IdRoundTripAndOrdering) {
  EXPECT_EQ(setting_count(2), 9);
  for (int id = 0; id < 9; ++id) EXPECT_EQ(setting_id(setting_from_id(id, 2)), id);
  // First qubit is the most significant base-3 digit.
  EXPECT_EQ(setting_id({Gate::kY90, Gate::kX90}), 3);
  EXPECT_EQ(setting_id({Gate::kX90, Gate::kId}), 2);
  EXPECT_THROW(setting_from_id(9, 2), Error);
  EXPECT_EQ(outcome_index({1, 0}), 2);
}

TEST(Gates, OverRotatedUnitary) {
  const double eps = 0.02;
  const double th = std::numbers::pi / 2.0 + eps;
  const Eigen::Matrix2cd x = gate_unitary(Gate::kX90, eps);
  Eigen::Matrix2cd expected;
  expected << std::cos(th / 2), -kI * std::sin(th / 2), -kI * std::sin(th / 2), std::cos(th / 2);
  EXPECT_NEAR((x - expected).norm(), 0.0, 1e-15);
  EXPECT_NEAR((gate_unitary(Gate::kId, eps) - Eigen::Matrix2cd::Identity()).norm(), 0.0, 0.0);
}

TEST(Born, Examples) {
  const std::vector<Eigen::Matrix2cd> id{gate_unitary(Gate::kId), gate_unitary(Gate::kId)};
  const RealVector p = born_probabilities(gg(), id);
  EXPECT_NEAR(p(0), 1.0, 1e-15);

  const RealVector q = born_probabilities(test::projector(bell_minus()), id);
  EXPECT_NEAR(q(1), 0.5, 1e-15);
  EXPECT_NEAR(q(2), 0.5, 1e-15);

  const std::vector<Eigen::Matrix2cd> yy{gate_unitary(Gate::kY90), gate_unitary(Gate::kY90)};
  const RealVector r = born_probabilities(x_state().matrix(), yy);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(r(k), 0.25, 1e-15);
}

TEST(Born, DepolarizingKeepsNormalization) {
  std::mt19937_64 rng(31);
  const Matrix rho = test::random_density(4, rng);
  RotationErrorModel noise{0.02, 0.05};
  for (int id = 0; id < 9; ++id) {
    const RealVector p = setting_probabilities(rho, setting_from_id(id, 2), noise);
    EXPECT_NEAR(p.sum(), 1.0, 1e-14);
    EXPECT_GE(p.minCoeff(), 0.0);
  }
  // Id pulses carry no error.
  const RealVector a = setting_probabilities(rho, {Gate::kId, Gate::kId}, noise);
  const RealVector b = setting_probabilities(rho, {Gate::kId, Gate::kId}, {});
  EXPECT_NEAR((a - b).norm(), 0.0, 1e-15);
}

TEST(Sampling, IdealGroundState) {
  const auto records = sample_shots(gg(), {Gate::kId, Gate::kId}, 1000, {}, AssignmentMatrix::ideal(2), 5);
  for (const auto& r : records) EXPECT_EQ(r.bits, (std::vector<std::uint8_t>{0, 0}));
}

TEST(Sampling, AssignmentFlips) {
  const auto records = sample_shots(gg(), {Gate::kId, Gate::kId}, 90000, {}, AssignmentMatrix::symmetric(2, 0.016), 6);
  for (int q = 0; q < 2; ++q) {
    double g = 0.0;
    for (const auto& r : records) g += r.bits[q] == 0;
    EXPECT_NEAR(g / records.size(), 0.984, 0.002);
  }
}

TEST(Sampling, Deterministic) {
  std::mt19937_64 rng(32);
  const Matrix rho = test::random_density(4, rng);
  const std::vector<int> ids{0, 4, 8, 3, 3, 7};
  const auto a = sample_shots(rho, ids, {0.02, 0.003}, AssignmentMatrix::symmetric(2, 0.016), 99);
  const auto b = sample_shots(rho, ids, {0.02, 0.003}, AssignmentMatrix::symmetric(2, 0.016), 99);
  EXPECT_EQ(a, b);
  const auto c = sample_shots(rho, ids, {0.02, 0.003}, AssignmentMatrix::symmetric(2, 0.016), 100);
  EXPECT_NE(a, c);
}

TEST(Sampling, FrequenciesMatchBornRule) {
  std::mt19937_64 rng(33);
  const Matrix rho = test::random_density(4, rng);
  const CliffordSetting s{Gate::kX90, Gate::kY90};
  const int n = 200000;
  const auto records = sample_shots(rho, s, n, {}, AssignmentMatrix::ideal(2), 7);
  const RealVector f = outcome_frequencies(records, setting_id(s), 2);
  const RealVector p = setting_probabilities(rho, s, {});
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(f(k), p(k), 4.0 * std::sqrt(p(k) * (1 - p(k)) / n));
}

TEST(ShotStream, UniformRangeAndDomains) {
  ShotStream s(1, 2, 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(ShotStream(1, 2, 0).next(), ShotStream(1, 2, 1).next());
  EXPECT_NE(ShotStream(1, 2, 0).next(), ShotStream(1, 3, 0).next());
  EXPECT_EQ(ShotStream(1, 2, 0).next(), ShotStream(1, 2, 0).next());
}

TEST(Assignment, Validation) {
  Eigen::Matrix2d bad;
  bad << 0.9, 0.2, 0.2, 0.8;  // first column sums to 1.1
  EXPECT_THROW(AssignmentMatrix({bad}), Error);
  Eigen::Matrix2d singular;
  singular << 0.5, 0.5, 0.5, 0.5;
  EXPECT_THROW(AssignmentMatrix({singular}), Error);
}

TEST(Mitigation, IdentityIsNoOp) {
  RealVector p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  EXPECT_NEAR((mitigate_assignment(p, AssignmentMatrix::ideal(2)) - p).norm(), 0.0, 0.0);
}

TEST(Mitigation, ExactInverse) {
  Eigen::Matrix2d a1, a2;
  a1 << 0.97, 0.05, 0.03, 0.95;
  a2 << 0.99, 0.02, 0.01, 0.98;
  const AssignmentMatrix a({a1, a2});
  RealVector p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  EXPECT_NEAR((mitigate_assignment(apply_assignment(p, a), a) - p).norm(), 0.0, 1e-12);
}

TEST(Mitigation, UnbiasedOverSeeds) {
  std::mt19937_64 rng(34);
  const Matrix rho = test::random_density(4, rng);
  const CliffordSetting s{Gate::kId, Gate::kId};
  const RealVector truth = setting_probabilities(rho, s, {});
  const AssignmentMatrix a = AssignmentMatrix::symmetric(2, 0.05);
  const int seeds = 100, shots = 2000;
  RealVector mean = RealVector::Zero(4), sq = RealVector::Zero(4);
  for (int k = 0; k < seeds; ++k) {
    const auto rec = sample_shots(rho, s, shots, {}, a, 1000 + k);
    const RealVector m = mitigate_assignment(outcome_frequencies(rec, setting_id(s), 2), a);
    mean += m / seeds;
    sq += m.cwiseProduct(m) / seeds;
  }
  for (int i = 0; i < 4; ++i) {
    const double sem = std::sqrt((sq(i) - mean(i) * mean(i)) / (seeds - 1));
    EXPECT_LT(std::abs(mean(i) - truth(i)), 3.0 * sem);
  }
}

TEST(RotationErrorModel, Validation) {
  EXPECT_THROW((RotationErrorModel{1.0, 0.0}.validate()), Error);
  EXPECT_THROW((RotationErrorModel{0.0, 1.0}.validate()), Error);
  EXPECT_NO_THROW((RotationErrorModel{0.02, 0.003}.validate()));
}

TEST(PreparedGroundState, StrayExcitation) {
  const DensityMatrix r = prepared_ground_state(2, 0.008);
  EXPECT_NEAR(r.matrix()(0, 0).real(), 0.992, 1e-15);
  EXPECT_NEAR(r.matrix()(1, 1).real(), 0.004, 1e-15);
  EXPECT_NEAR(r.matrix()(2, 2).real(), 0.004, 1e-15);
  EXPECT_THROW(prepared_ground_state(2, 1.5), Error);
}

TEST(ShotCsv, RoundTrip) {
  const auto records = sample_shots(x_state().matrix(), {0, 1, 2, 3, 4, 5, 6, 7, 8}, {}, AssignmentMatrix::ideal(2), 8);
  std::stringstream ss;
  write_shot_csv(ss, records, 2);
  EXPECT_EQ(ss.str().substr(0, 16), "setting_id,Q1,Q2");
  int n = 0;
  EXPECT_EQ(read_shot_csv(ss, &n), records);
  EXPECT_EQ(n, 2);
  std::stringstream bad("nope\n");
  EXPECT_THROW(read_shot_csv(bad), Error);
}

}  // namespace
}  // namespace qres
