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

// Direct Pauli tomography with readout mitigation and projection onto the
// physical state space.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qres/measurement_sim.hpp"
#include "qres/qlinalg.hpp"

namespace qres {

struct TomographyResult {
  std::map<std::string, double> raw_expectations;
  OperatorMatrix rho_linear;
  DensityMatrix rho_mle;
  std::string method = "eigenvalue-truncation";
};

/// Measures the 3^n settings that rotate X, Y, Z into the readout basis
/// (Y90 reads X, X90 reads Y, Id reads Z). Frequencies are mitigated with
/// `a` before expectations are formed; words containing I average over every
/// compatible setting. shots_per_setting = 0 substitutes exact probabilities.
std::map<std::string, double> measure_pauli_expectations(const Matrix& rho, int shots_per_setting,
                                                         const RotationErrorModel& noise,
                                                         const AssignmentMatrix& a, std::uint64_t seed);

/// Closest positive unit-trace matrix in Frobenius norm (eigenvalue truncation).
DensityMatrix mle_project(const OperatorMatrix& rho_linear);

TomographyResult reconstruct(const std::map<std::string, double>& expectations);

/// Gate that brings `pauli` (X, Y or Z) onto the readout axis, and the sign
/// s with U^dagger Z U = s * pauli for that gate.
Gate measurement_gate(char pauli);
int measurement_sign(Gate g, char pauli);

}  // namespace qres
