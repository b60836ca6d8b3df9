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

// Measurement-chain emulation: basis-change pulses, Born-rule sampling,
// assignment (readout) errors and their mitigation.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qres/qlinalg.hpp"

namespace qres {

/// Basis-change pulse applied before a computational-basis readout.
enum class Gate : int { kX90 = 0, kY90 = 1, kId = 2 };

const char* gate_name(Gate g);

/// One gate per qubit, first entry on the first qubit.
using CliffordSetting = std::vector<Gate>;

/// Setting index in base 3 with the first qubit as the most significant digit.
int setting_id(const CliffordSetting& setting);
CliffordSetting setting_from_id(int id, int n_qubits);
int setting_count(int n_qubits);

/// exp(-i theta sigma / 2) about x or y with theta = pi/2 + over_rotation;
/// identity for kId.
Eigen::Matrix2cd gate_unitary(Gate g, double over_rotation = 0.0);

struct RotationErrorModel {
  double over_rotation = 0.0;   // rad, per pi/2 pulse
  double depolarizing_p = 0.0;  // per applied pulse

  void validate() const;
  bool ideal() const { return over_rotation == 0.0 && depolarizing_p == 0.0; }
};

/// Per-qubit readout confusion; A[q](b', b) = P(read b' | true b).
class AssignmentMatrix {
 public:
  AssignmentMatrix() = default;
  explicit AssignmentMatrix(std::vector<Eigen::Matrix2d> per_qubit);

  static AssignmentMatrix ideal(int n_qubits);
  /// Symmetric flip probability p on every qubit.
  static AssignmentMatrix symmetric(int n_qubits, double flip);

  int n_qubits() const { return static_cast<int>(a_.size()); }
  const Eigen::Matrix2d& qubit(int q) const { return a_.at(q); }

 private:
  std::vector<Eigen::Matrix2d> a_;
};

struct ShotRecord {
  int setting_id = 0;
  std::vector<std::uint8_t> bits;  // 0 = g, 1 = e; first entry is the first qubit

  bool operator==(const ShotRecord&) const = default;
};

/// Outcome index of a bit list, first qubit most significant.
int outcome_index(const std::vector<std::uint8_t>& bits);

/// p(b) = <b| U rho U^dagger |b> for the tensor product of per-qubit unitaries.
RealVector born_probabilities(const Matrix& rho, const std::vector<Eigen::Matrix2cd>& rotations);

/// Outcome distribution (before readout error) of a setting under the rotation
/// error model: over-rotated pulses, each followed by single-qubit
/// depolarization with probability p. Unpulsed qubits are untouched.
RealVector setting_probabilities(const Matrix& rho, const CliffordSetting& setting,
                                 const RotationErrorModel& noise);

/// Distribution after independent per-qubit readout errors.
RealVector apply_assignment(const RealVector& p, const AssignmentMatrix& a);

/// Applies (A_1 x ... x A_n)^{-1}; result sums to one but may hold small
/// negative entries. Throws kSingularMatrix for a non-invertible A.
RealVector mitigate_assignment(const RealVector& counts, const AssignmentMatrix& a);

/// Counter-based generator: the stream for (seed, index) does not depend on
/// how many other streams were drawn before it.
class ShotStream {
 public:
  ShotStream(std::uint64_t seed, std::uint64_t index, std::uint64_t domain = 0);
  std::uint64_t next();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

/// Samples `setting_ids.size()` shots; shot i uses setting_ids[i] and the
/// stream (seed, first_index + i). Readout flips follow `a`.
std::vector<ShotRecord> sample_shots(const Matrix& rho, const std::vector<int>& setting_ids,
                                     const RotationErrorModel& noise, const AssignmentMatrix& a,
                                     std::uint64_t seed, std::uint64_t first_index = 0);

/// Fixed-setting convenience overload.
std::vector<ShotRecord> sample_shots(const Matrix& rho, const CliffordSetting& setting, int n_shots,
                                     const RotationErrorModel& noise, const AssignmentMatrix& a,
                                     std::uint64_t seed, std::uint64_t first_index = 0);

/// Empirical outcome frequencies of the records with the given setting.
RealVector outcome_frequencies(const std::vector<ShotRecord>& records, int setting_id, int n_qubits);

/// (1 - eta)|g..g><g..g| + eta/n sum_q |e_q><e_q| (single stray excitation).
DensityMatrix prepared_ground_state(int n_qubits, double eta);

/// CSV with header `setting_id,Q1,...,Qn` and one g/e character per qubit.
void write_shot_csv(std::ostream& out, const std::vector<ShotRecord>& records, int n_qubits);
std::vector<ShotRecord> read_shot_csv(std::istream& in, int* n_qubits = nullptr);

}  // namespace qres
