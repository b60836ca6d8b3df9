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

#include "qres/error.hpp"
#include "qres/observables.hpp"
#include "qres/reservoir_model.hpp"
#include "test_util.hpp"

namespace qres {
namespace {

const SpaceLayout kTwo = SpaceLayout::qubits(2);

DensityMatrix state(const Matrix& m) { return DensityMatrix(OperatorMatrix(kTwo, m)); }

Vector phi_plus() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

TEST(EigenbasisPhase, WrapsIntoRange) {
  EXPECT_NEAR(EigenbasisPhase(-0.5).value(), 2.0 * std::numbers::pi - 0.5, 1e-15);
  EXPECT_NEAR(EigenbasisPhase(7.0).value(), 7.0 - 2.0 * std::numbers::pi, 1e-15);
  EXPECT_EQ(EigenbasisPhase(2.0 * std::numbers::pi).value(), 0.0);
  EXPECT_THROW(EigenbasisPhase(std::nan("")), Error);
}

TEST(Fidelity, Examples) {
  const Vector minus = bell_minus();
  EXPECT_NEAR(fidelity_to_pure(state(test::projector(minus)), minus), 1.0, 1e-15);
  EXPECT_NEAR(fidelity_to_pure(x_state(), minus), 0.5, 1e-15);
  EXPECT_NEAR(fidelity_to_pure(state(Matrix::Identity(4, 4) / 4.0), minus), 0.25, 1e-15);
  Vector bad = minus * 2.0;
  EXPECT_THROW(fidelity_to_pure(state(test::projector(minus)), bad), Error);
}

TEST(Purity, Examples) {
  EXPECT_NEAR(purity(state(test::projector(phi_plus()))), 1.0, 1e-15);
  EXPECT_NEAR(purity(x_state()), 0.5, 1e-15);
  EXPECT_NEAR(purity(state(Matrix::Identity(4, 4) / 4.0)), 0.25, 1e-15);
}

TEST(Populations, Examples) {
  const PopulationSet p = eigenstate_populations(state(test::projector(bell_minus())));
  EXPECT_NEAR(p.gg, 0.0, 1e-15);
  EXPECT_NEAR(p.plus, 0.0, 1e-15);
  EXPECT_NEAR(p.minus, 1.0, 1e-15);
  EXPECT_NEAR(p.ee, 0.0, 1e-15);
  Vector ge = Vector::Zero(4);
  ge(1) = 1.0;
  for (double phi : {0.0, 0.4, 2.0, 5.5}) {
    const PopulationSet q = eigenstate_populations(state(test::projector(ge)), EigenbasisPhase(phi));
    EXPECT_NEAR(q.plus, 0.5, 1e-15);
    EXPECT_NEAR(q.minus, 0.5, 1e-15);
  }
  std::mt19937_64 rng(21);
  const PopulationSet r = eigenstate_populations(state(test::random_density(4, rng)), EigenbasisPhase(1.3));
  EXPECT_NEAR(r.sum(), 1.0, 1e-12);
}

TEST(Phase, RotationMapsBellStates) {
  const EigenbasisPhase phi(0.9);
  const Matrix u = phase_rotation(phi);
  EXPECT_NEAR((u * bell_minus() - psi_minus(phi)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((u * bell_plus() - psi_plus(phi)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((psi_minus(EigenbasisPhase(0.0)) - bell_minus()).norm(), 0.0, 1e-15);
}

TEST(Phase, EstimateRecoversInjectedPhase) {
  for (double phi : {0.0, 0.7, 3.0, 5.9}) {
    const Matrix u = phase_rotation(EigenbasisPhase(phi));
    const Matrix rho = u * (0.9 * test::projector(bell_minus()) + 0.1 * Matrix::Identity(4, 4) / 4.0) * u.adjoint();
    const double est = estimate_phase(rho).value();
    const double diff = std::remainder(est - phi, 2.0 * std::numbers::pi);
    EXPECT_NEAR(diff, 0.0, 1e-4) << phi;
  }
}

TEST(Pauli, XStateCorrelators) {
  const DensityMatrix x = x_state();
  EXPECT_NEAR(pauli_expectation(x, "YY"), -1.0, 1e-15);
  EXPECT_NEAR(pauli_expectation(x, "XX"), 0.0, 1e-15);
  EXPECT_NEAR(pauli_expectation(x, "ZZ"), 0.0, 1e-15);
  EXPECT_NEAR(pauli_expectation(x, "II"), 1.0, 1e-15);
}

TEST(Pauli, BellStabilizers) {
  const DensityMatrix p = state(test::projector(phi_plus()));
  EXPECT_NEAR(pauli_expectation(p, "XX"), 1.0, 1e-15);
  EXPECT_NEAR(pauli_expectation(p, "ZZ"), 1.0, 1e-15);
  EXPECT_NEAR(pauli_expectation(p, "YY"), -1.0, 1e-15);
}

TEST(Pauli, WordsAndErrors) {
  const auto words = all_pauli_words(2);
  ASSERT_EQ(words.size(), 16u);
  EXPECT_EQ(words.front(), "II");
  EXPECT_EQ(words.back(), "ZZ");
  EXPECT_THROW(pauli_expectation(x_state(), "XQ"), Error);
  EXPECT_THROW(pauli_expectation(x_state(), "XXX"), Error);
}

TEST(Pauli, RoundTripThroughExpectations) {
  std::mt19937_64 rng(22);
  const DensityMatrix rho = state(test::random_density(4, rng));
  const OperatorMatrix back = density_matrix_from_paulis(pauli_expectations(rho));
  EXPECT_NEAR((back.matrix() - rho.matrix()).norm(), 0.0, 1e-14);
}

TEST(Pauli, ReconstructionExamples) {
  Matrix gg = Matrix::Zero(4, 4);
  gg(0, 0) = 1.0;
  EXPECT_NEAR((density_matrix_from_paulis(pauli_expectations(state(gg))).matrix() - gg).norm(), 0.0, 1e-15);

  const Matrix x = density_matrix_from_paulis(pauli_expectations(x_state())).matrix();
  EXPECT_NEAR(x(0, 0).real(), 0.25, 1e-15);
  EXPECT_NEAR(x(3, 3).real(), 0.25, 1e-15);
  EXPECT_NEAR(x(0, 3).real(), 0.25, 1e-15);
  EXPECT_NEAR(x(1, 2).real(), -0.25, 1e-15);
  EXPECT_NEAR(x(1, 1).real(), 0.25, 1e-15);
  EXPECT_NEAR(x(0, 1).real(), 0.0, 1e-15);

  std::map<std::string, double> only_identity;
  for (const auto& w : all_pauli_words(2)) only_identity[w] = w == "II" ? 1.0 : 0.0;
  EXPECT_NEAR((density_matrix_from_paulis(only_identity).matrix() - Matrix::Identity(4, 4) / 4.0).norm(), 0.0, 1e-15);
}

// The X state is an equal mixture of |-> and |Phi+>, and also of the two
// anti-correlated Y-basis product states.
TEST(XState, Decompositions) {
  const Matrix x = x_state().matrix();
  const Matrix bells = 0.5 * test::projector(bell_minus()) + 0.5 * test::projector(phi_plus());
  EXPECT_LT((x - bells).cwiseAbs().maxCoeff(), 1e-12);
  Vector yp(2), ym(2);
  yp << 1.0 / std::sqrt(2.0), kI / std::sqrt(2.0);
  ym << 1.0 / std::sqrt(2.0), -kI / std::sqrt(2.0);
  const Matrix sep = 0.5 * test::projector(kron(yp, ym)) + 0.5 * test::projector(kron(ym, yp));
  EXPECT_LT((x - sep).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(purity(x_state()), 0.5, 1e-12);
}

TEST(StateFidelity, PureAndMixed) {
  const Matrix minus = test::projector(bell_minus());
  EXPECT_NEAR(state_fidelity(minus, minus), 1.0, 1e-10);
  EXPECT_NEAR(state_fidelity(minus, x_state().matrix()), 0.5, 1e-10);
  std::mt19937_64 rng(23);
  const Matrix a = test::random_density(4, rng);
  EXPECT_NEAR(state_fidelity(a, a), 1.0, 1e-10);
}

TEST(QubitRegister, TracesOutResonators) {
  const SpaceLayout l({2, 2, 3}, {"Q1", "Q2", "R1"});
  Matrix vac = Matrix::Zero(3, 3);
  vac(0, 0) = 1.0;
  const Matrix q = test::projector(bell_minus());
  const DensityMatrix full(OperatorMatrix(l, kron(q, vac)));
  EXPECT_NEAR((qubit_register(full).matrix() - q).norm(), 0.0, 1e-15);
}

}  // namespace
}  // namespace qres
