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

#pragma once

// Scalars and matrices reported for two-qubit register states.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qres/qlinalg.hpp"

namespace qres {

/// Inter-qubit dynamical phase, wrapped into [0, 2 pi).
class EigenbasisPhase {
 public:
  EigenbasisPhase() = default;
  explicit EigenbasisPhase(double phi);
  double value() const { return phi_; }

 private:
  double phi_ = 0.0;
};

struct PopulationSet {
  double gg = 0.0;
  double plus = 0.0;
  double minus = 0.0;
  double ee = 0.0;

  double sum() const { return gg + plus + minus + ee; }
};

/// Reduces `rho` to its qubit subsystems (labels starting with 'Q'). Returns
/// the state unchanged when it has no other subsystems.
DensityMatrix qubit_register(const DensityMatrix& rho);

/// <psi|rho|psi>; resonators are traced out first when present.
double fidelity_to_pure(const DensityMatrix& rho, const Vector& psi);

double purity(const DensityMatrix& rho);

/// (|01> + e^{-i phi}|10>)/sqrt2 and (|01> - e^{-i phi}|10>)/sqrt2.
Vector psi_plus(const EigenbasisPhase& phase);
Vector psi_minus(const EigenbasisPhase& phase);

/// Single-qubit phase diag(1, e^{-i phi}) on Q1; maps |+-> onto psi_+-(phi).
Matrix phase_rotation(const EigenbasisPhase& phase);

PopulationSet eigenstate_populations(const DensityMatrix& rho, const EigenbasisPhase& phase = {});

/// Tensor product of Pauli matrices, first letter on the first qubit.
Matrix pauli_operator(std::string_view word);

/// All 4^n words over {I,X,Y,Z}, in lexicographic order of that alphabet.
std::vector<std::string> all_pauli_words(int n_qubits);

double pauli_expectation(const DensityMatrix& rho, std::string_view word);

std::map<std::string, double> pauli_expectations(const DensityMatrix& rho);

/// (1/2^n) sum_P <P> P. Hermitian with unit trace; not necessarily positive.
OperatorMatrix density_matrix_from_paulis(const std::map<std::string, double>& expectations);

/// Phase phi maximizing the overlap with psi_-(phi), i.e. the magnitude of the
/// transverse correlator <XX + YY> of the phase-corrected state. Golden-section
/// search to 1e-4 rad after a coarse grid bracket.
EigenbasisPhase estimate_phase(const Matrix& rho);

/// The X state (|-><-| + |Phi+><Phi+|)/2.
DensityMatrix x_state();

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 of two states.
double state_fidelity(const Matrix& a, const Matrix& b);

}  // namespace qres
