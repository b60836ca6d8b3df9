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

#include "qres/tomography.hpp"

#include <cmath>
#include <numeric>

#include "qres/error.hpp"
#include "qres/observables.hpp"

namespace qres {

Gate measurement_gate(char pauli) {
  switch (pauli) {
    case 'X': return Gate::kY90;
    case 'Y': return Gate::kX90;
    case 'Z': return Gate::kId;
    default: fail(ErrorCode::kInvalidArgument, std::string("no readout gate for Pauli ") + pauli);
  }
}

int measurement_sign(Gate g, char pauli) {
  const Eigen::Matrix2cd u = gate_unitary(g);
  const Eigen::Matrix2cd z = pauli_operator("Z");
  const double s = (u.adjoint() * z * u * Eigen::Matrix2cd(pauli_operator(std::string(1, pauli)))).trace().real() / 2.0;
  if (std::abs(std::abs(s) - 1.0) > 1e-12)
    fail(ErrorCode::kInvalidArgument, std::string(gate_name(g)) + " does not read out Pauli " + pauli);
  return s > 0 ? 1 : -1;
}

std::map<std::string, double> measure_pauli_expectations(const Matrix& rho, int shots_per_setting,
                                                         const RotationErrorModel& noise,
                                                         const AssignmentMatrix& a, std::uint64_t seed) {
  const int n = a.n_qubits();
  if (rho.rows() != (1 << n)) fail(ErrorCode::kDimensionMismatch, "state and assignment qubit counts differ");
  if (shots_per_setting < 0) fail(ErrorCode::kInvalidArgument, "shots_per_setting must be >= 0");
  const int n_settings = setting_count(n);
  std::vector<RealVector> dist(n_settings);
  for (int sid = 0; sid < n_settings; ++sid) {
    const CliffordSetting s = setting_from_id(sid, n);
    RealVector counts;
    if (shots_per_setting == 0) {
      counts = apply_assignment(setting_probabilities(rho, s, noise), a);
    } else {
      const auto shots = sample_shots(rho, s, shots_per_setting, noise, a, seed,
                                      static_cast<std::uint64_t>(sid) * static_cast<std::uint64_t>(shots_per_setting));
      counts = outcome_frequencies(shots, sid, n);
    }
    dist[sid] = mitigate_assignment(counts, a);
  }

  std::map<std::string, double> out;
  for (const auto& word : all_pauli_words(n)) {
    if (word.find_first_not_of('I') == std::string::npos) {
      out[word] = 1.0;
      continue;
    }
    double sum = 0.0;
    int used = 0;
    for (int sid = 0; sid < n_settings; ++sid) {
      const CliffordSetting s = setting_from_id(sid, n);
      std::vector<int> sign(n, 0);
      bool compatible = true;
      for (int q = 0; q < n && compatible; ++q) {
        if (word[q] == 'I') continue;
        if (measurement_gate(word[q]) != s[q]) compatible = false;
        else sign[q] = measurement_sign(s[q], word[q]);
      }
      if (!compatible) continue;
      double e = 0.0;
      for (int b = 0; b < (1 << n); ++b) {
        double parity = 1.0;
        for (int q = 0; q < n; ++q)
          if (sign[q] != 0) parity *= sign[q] * (((b >> (n - 1 - q)) & 1) ? -1.0 : 1.0);
        e += dist[sid](b) * parity;
      }
      sum += e;
      ++used;
    }
    out[word] = sum / used;
  }
  return out;
}

DensityMatrix mle_project(const OperatorMatrix& rho_linear) {
  if (rho_linear.hermiticity_error() > 1e-9) fail(ErrorCode::kNotHermitian, "projection input is not Hermitian");
  if (std::abs(rho_linear.trace().real() - 1.0) > 1e-6)
    fail(ErrorCode::kInvalidArgument, "projection input must have unit trace");
  const auto eig = eig_hermitian(rho_linear);
  const int d = static_cast<int>(eig.values.size());
  // Ascending order: walk from the smallest eigenvalue upwards.
  std::vector<double> lam(eig.values.data(), eig.values.data() + d);
  const double shift = (1.0 - std::accumulate(lam.begin(), lam.end(), 0.0)) / d;
  for (double& l : lam) l += shift;
  double deficit = 0.0;
  int k = 0;
  while (k < d && lam[k] + deficit / (d - k) < 0.0) {
    deficit += lam[k];
    lam[k] = 0.0;
    ++k;
  }
  for (int i = k; i < d; ++i) lam[i] += deficit / (d - k);
  RealVector vals = Eigen::Map<RealVector>(lam.data(), d);
  Matrix m = eig.vectors * vals.asDiagonal() * eig.vectors.adjoint();
  m = (m + m.adjoint()) / 2.0;
  m /= m.trace().real();
  return DensityMatrix(OperatorMatrix(rho_linear.layout(), m));
}

TomographyResult reconstruct(const std::map<std::string, double>& expectations) {
  TomographyResult r;
  r.raw_expectations = expectations;
  r.rho_linear = density_matrix_from_paulis(expectations);
  r.rho_mle = mle_project(r.rho_linear);
  return r;
}

}  // namespace qres
