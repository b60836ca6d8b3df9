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

#include "qres/measurement_sim.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "qres/error.hpp"

namespace qres {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

int bit_shift(int q, int n) { return n - 1 - q; }

int qubits_of(const Matrix& rho) {
  int n = 0;
  while ((1 << n) < rho.rows()) ++n;
  if ((1 << n) != rho.rows() || rho.rows() != rho.cols())
    fail(ErrorCode::kDimensionMismatch, "measurement needs a square qubit-register matrix");
  return n;
}

// U rho U^dagger with a single-qubit U acting on qubit q.
Matrix apply_local(const Matrix& rho, const Eigen::Matrix2cd& u, int q, int n) {
  Matrix full = Matrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) full = kron(full, k == q ? Matrix(u) : identity(2));
  return full * rho * full.adjoint();
}

Matrix depolarize(const Matrix& rho, double p, int q, int n) {
  Matrix out = (1.0 - p) * rho;
  for (char c : {'I', 'X', 'Y', 'Z'}) {
    const Eigen::Matrix2cd s = pauli(c);
    out += (p / 4.0) * apply_local(rho, s, q, n);
  }
  return out;
}

RealVector diagonal_probabilities(const Matrix& rho) {
  RealVector p(rho.rows());
  for (int i = 0; i < rho.rows(); ++i) {
    const double v = rho(i, i).real();
    if (v < -1e-10) fail(ErrorCode::kInternal, "negative outcome probability");
    p(i) = std::max(v, 0.0);
  }
  const double s = p.sum();
  if (std::abs(s - 1.0) > 1e-10) fail(ErrorCode::kInternal, "outcome probabilities do not sum to one");
  return p / s;
}

RealVector apply_per_qubit(const RealVector& p, const std::vector<Eigen::Matrix2d>& mats) {
  const int n = static_cast<int>(mats.size());
  if (p.size() != (1 << n)) fail(ErrorCode::kDimensionMismatch, "distribution size differs from 2^n");
  RealVector x = p;
  for (int q = 0; q < n; ++q) {
    const int mask = 1 << bit_shift(q, n);
    for (int i = 0; i < x.size(); ++i) {
      if (i & mask) continue;
      const double x0 = x(i), x1 = x(i | mask);
      x(i) = mats[q](0, 0) * x0 + mats[q](0, 1) * x1;
      x(i | mask) = mats[q](1, 0) * x0 + mats[q](1, 1) * x1;
    }
  }
  return x;
}

}  // namespace

const char* gate_name(Gate g) {
  switch (g) {
    case Gate::kX90: return "X90";
    case Gate::kY90: return "Y90";
    case Gate::kId: return "Id";
  }
  return "?";
}

int setting_count(int n_qubits) {
  int c = 1;
  for (int q = 0; q < n_qubits; ++q) c *= 3;
  return c;
}

int setting_id(const CliffordSetting& setting) {
  int id = 0;
  for (Gate g : setting) id = 3 * id + static_cast<int>(g);
  return id;
}

CliffordSetting setting_from_id(int id, int n_qubits) {
  if (id < 0 || id >= setting_count(n_qubits)) fail(ErrorCode::kInvalidArgument, "setting id out of range");
  CliffordSetting s(n_qubits);
  for (int q = n_qubits - 1; q >= 0; --q) {
    s[q] = static_cast<Gate>(id % 3);
    id /= 3;
  }
  return s;
}

Eigen::Matrix2cd gate_unitary(Gate g, double over_rotation) {
  if (g == Gate::kId) return Eigen::Matrix2cd::Identity();
  const double theta = std::numbers::pi / 2.0 + over_rotation;
  const Eigen::Matrix2cd s = pauli(g == Gate::kX90 ? 'X' : 'Y');
  return std::cos(theta / 2.0) * Eigen::Matrix2cd::Identity() - kI * std::sin(theta / 2.0) * s;
}

void RotationErrorModel::validate() const {
  if (!(std::abs(over_rotation) < std::numbers::pi / 4.0))
    fail(ErrorCode::kInvalidArgument, "over_rotation must satisfy |eps| < pi/4");
  if (!(depolarizing_p >= 0.0 && depolarizing_p < 1.0))
    fail(ErrorCode::kInvalidArgument, "depolarizing probability must lie in [0, 1)");
}

AssignmentMatrix::AssignmentMatrix(std::vector<Eigen::Matrix2d> per_qubit) : a_(std::move(per_qubit)) {
  if (a_.empty()) fail(ErrorCode::kInvalidArgument, "assignment matrix needs at least one qubit");
  for (const auto& m : a_) {
    if ((m.array() < 0.0).any() || (m.array() > 1.0).any())
      fail(ErrorCode::kInvalidArgument, "assignment entries must lie in [0, 1]");
    for (int c = 0; c < 2; ++c)
      if (std::abs(m.col(c).sum() - 1.0) > 1e-12)
        fail(ErrorCode::kInvalidArgument, "assignment columns must sum to one");
    if (std::abs(m.determinant()) < 1e-12) fail(ErrorCode::kSingularMatrix, "assignment matrix is singular");
  }
}

AssignmentMatrix AssignmentMatrix::ideal(int n_qubits) { return symmetric(n_qubits, 0.0); }

AssignmentMatrix AssignmentMatrix::symmetric(int n_qubits, double flip) {
  Eigen::Matrix2d m;
  m << 1.0 - flip, flip, flip, 1.0 - flip;
  return AssignmentMatrix(std::vector<Eigen::Matrix2d>(n_qubits, m));
}

int outcome_index(const std::vector<std::uint8_t>& bits) {
  int idx = 0;
  for (auto b : bits) idx = 2 * idx + (b ? 1 : 0);
  return idx;
}

RealVector born_probabilities(const Matrix& rho, const std::vector<Eigen::Matrix2cd>& rotations) {
  const int n = qubits_of(rho);
  if (static_cast<int>(rotations.size()) != n) fail(ErrorCode::kDimensionMismatch, "one rotation per qubit required");
  Matrix u = Matrix::Identity(1, 1);
  for (const auto& r : rotations) u = kron(u, Matrix(r));
  return diagonal_probabilities(u * rho * u.adjoint());
}

RealVector setting_probabilities(const Matrix& rho, const CliffordSetting& setting,
                                 const RotationErrorModel& noise) {
  const int n = qubits_of(rho);
  if (static_cast<int>(setting.size()) != n) fail(ErrorCode::kDimensionMismatch, "setting length differs from qubit count");
  noise.validate();
  Matrix state = rho;
  for (int q = 0; q < n; ++q) {
    if (setting[q] == Gate::kId) continue;
    state = apply_local(state, gate_unitary(setting[q], noise.over_rotation), q, n);
    if (noise.depolarizing_p > 0.0) state = depolarize(state, noise.depolarizing_p, q, n);
  }
  return diagonal_probabilities(state);
}

RealVector apply_assignment(const RealVector& p, const AssignmentMatrix& a) {
  std::vector<Eigen::Matrix2d> mats;
  for (int q = 0; q < a.n_qubits(); ++q) mats.push_back(a.qubit(q));
  return apply_per_qubit(p, mats);
}

RealVector mitigate_assignment(const RealVector& counts, const AssignmentMatrix& a) {
  std::vector<Eigen::Matrix2d> inv;
  for (int q = 0; q < a.n_qubits(); ++q) {
    if (std::abs(a.qubit(q).determinant()) < 1e-12)
      fail(ErrorCode::kSingularMatrix, "assignment matrix is singular");
    inv.push_back(a.qubit(q).inverse());
  }
  return apply_per_qubit(counts, inv);
}

ShotStream::ShotStream(std::uint64_t seed, std::uint64_t index, std::uint64_t domain)
    : state_(mix64(seed) ^ mix64(index * kGolden + domain * 0xD1B54A32D192ED03ULL + 1)) {}

std::uint64_t ShotStream::next() {
  state_ += kGolden;
  return mix64(state_);
}

double ShotStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<ShotRecord> sample_shots(const Matrix& rho, const std::vector<int>& setting_ids,
                                     const RotationErrorModel& noise, const AssignmentMatrix& a,
                                     std::uint64_t seed, std::uint64_t first_index) {
  const int n = qubits_of(rho);
  if (a.n_qubits() != n) fail(ErrorCode::kDimensionMismatch, "assignment matrix qubit count differs");
  std::map<int, RealVector> cdf;
  for (int id : setting_ids) {
    if (cdf.count(id)) continue;
    RealVector p = setting_probabilities(rho, setting_from_id(id, n), noise);
    for (int i = 1; i < p.size(); ++i) p(i) += p(i - 1);
    cdf.emplace(id, p);
  }
  std::vector<ShotRecord> out;
  out.reserve(setting_ids.size());
  for (std::size_t i = 0; i < setting_ids.size(); ++i) {
    ShotStream rng(seed, first_index + i);
    const RealVector& c = cdf.at(setting_ids[i]);
    const double u = rng.uniform() * c(c.size() - 1);
    int outcome = 0;
    while (outcome < c.size() - 1 && u >= c(outcome)) ++outcome;
    ShotRecord rec{setting_ids[i], std::vector<std::uint8_t>(n)};
    for (int q = 0; q < n; ++q) {
      const int truth = (outcome >> bit_shift(q, n)) & 1;
      const double flip = a.qubit(q)(1 - truth, truth);
      rec.bits[q] = static_cast<std::uint8_t>(rng.uniform() < flip ? 1 - truth : truth);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ShotRecord> sample_shots(const Matrix& rho, const CliffordSetting& setting, int n_shots,
                                     const RotationErrorModel& noise, const AssignmentMatrix& a,
                                     std::uint64_t seed, std::uint64_t first_index) {
  if (n_shots < 1) fail(ErrorCode::kInvalidArgument, "n_shots must be >= 1");
  return sample_shots(rho, std::vector<int>(n_shots, setting_id(setting)), noise, a, seed, first_index);
}

RealVector outcome_frequencies(const std::vector<ShotRecord>& records, int setting_id, int n_qubits) {
  RealVector f = RealVector::Zero(1 << n_qubits);
  std::size_t count = 0;
  for (const auto& r : records) {
    if (r.setting_id != setting_id) continue;
    f(outcome_index(r.bits)) += 1.0;
    ++count;
  }
  if (count == 0) fail(ErrorCode::kInvalidArgument, "no records for setting " + std::to_string(setting_id));
  return f / static_cast<double>(count);
}

DensityMatrix prepared_ground_state(int n_qubits, double eta) {
  if (eta < 0.0 || eta > 1.0) fail(ErrorCode::kInvalidArgument, "preparation error must lie in [0, 1]");
  const int d = 1 << n_qubits;
  Matrix rho = Matrix::Zero(d, d);
  rho(0, 0) = 1.0 - eta;
  for (int q = 0; q < n_qubits; ++q) rho(1 << bit_shift(q, n_qubits), 1 << bit_shift(q, n_qubits)) += eta / n_qubits;
  return DensityMatrix(OperatorMatrix(SpaceLayout::qubits(n_qubits), rho));
}

void write_shot_csv(std::ostream& out, const std::vector<ShotRecord>& records, int n_qubits) {
  out << "setting_id";
  for (int q = 0; q < n_qubits; ++q) out << ",Q" << (q + 1);
  out << '\n';
  for (const auto& r : records) {
    if (static_cast<int>(r.bits.size()) != n_qubits) fail(ErrorCode::kDimensionMismatch, "record bit count differs");
    out << r.setting_id;
    for (auto b : r.bits) out << ',' << (b ? 'e' : 'g');
    out << '\n';
  }
}

std::vector<ShotRecord> read_shot_csv(std::istream& in, int* n_qubits) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("setting_id", 0) != 0)
    fail(ErrorCode::kIo, "shot CSV is missing its header");
  int n = 0;
  for (char c : line)
    if (c == ',') ++n;
  if (n < 1) fail(ErrorCode::kIo, "shot CSV has no qubit columns");
  std::vector<ShotRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    ShotRecord r;
    std::getline(ss, cell, ',');
    try {
      r.setting_id = std::stoi(cell);
    } catch (const std::exception&) {
      fail(ErrorCode::kIo, "bad setting id in shot CSV: " + cell);
    }
    while (std::getline(ss, cell, ',')) {
      if (cell != "g" && cell != "e") fail(ErrorCode::kIo, "bad bit in shot CSV: " + cell);
      r.bits.push_back(cell == "e" ? 1 : 0);
    }
    if (static_cast<int>(r.bits.size()) != n) fail(ErrorCode::kIo, "shot CSV row has the wrong width");
    records.push_back(std::move(r));
  }
  if (n_qubits) *n_qubits = n;
  return records;
}

}  // namespace qres
