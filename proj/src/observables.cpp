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

#include "qres/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qres/error.hpp"

namespace qres {

namespace {

constexpr double kClampSlack = 1e-6;

double clamp_checked(double value, double lo, double hi, const char* what) {
  if (value < lo - kClampSlack || value > hi + kClampSlack)
    fail(ErrorCode::kInternal, std::string(what) + " out of range: " + std::to_string(value));
  return std::clamp(value, lo, hi);
}

Matrix matrix_sqrt_psd(const Matrix& a) {
  auto eig = eig_hermitian(Matrix((a + a.adjoint()) / 2.0));
  RealVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
}

double minus_overlap(const Matrix& rho, double phi) {
  const Vector v = psi_minus(EigenbasisPhase(phi));
  return (v.adjoint() * rho * v)(0).real();
}

}  // namespace

EigenbasisPhase::EigenbasisPhase(double phi) {
  if (!std::isfinite(phi)) fail(ErrorCode::kInvalidArgument, "phase must be finite");
  const double two_pi = 2.0 * std::numbers::pi;
  phi_ = std::fmod(phi, two_pi);
  if (phi_ < 0.0) phi_ += two_pi;
  if (phi_ >= two_pi) phi_ = 0.0;
}

DensityMatrix qubit_register(const DensityMatrix& rho) {
  std::set<std::string> keep;
  for (const auto& label : rho.layout().labels())
    if (!label.empty() && label.front() == 'Q') keep.insert(label);
  if (keep.empty()) fail(ErrorCode::kInvalidArgument, "state has no qubit subsystems");
  if (static_cast<int>(keep.size()) == rho.layout().size()) return rho;
  return partial_trace(rho, keep);
}

double fidelity_to_pure(const DensityMatrix& rho, const Vector& psi) {
  const DensityMatrix q = qubit_register(rho);
  if (psi.size() != q.dim()) fail(ErrorCode::kDimensionMismatch, "ket and state dimensions differ");
  if (std::abs(psi.norm() - 1.0) > 1e-9) fail(ErrorCode::kInvalidArgument, "target ket is not normalized");
  const Complex f = (psi.adjoint() * q.matrix() * psi)(0);
  return clamp_checked(f.real(), 0.0, 1.0, "fidelity");
}

double purity(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  const double p = m.cwiseAbs2().sum();
  return clamp_checked(p, 1.0 / rho.dim(), 1.0, "purity");
}

Vector psi_plus(const EigenbasisPhase& phase) {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = std::exp(-kI * phase.value()) / std::sqrt(2.0);
  return v;
}

Vector psi_minus(const EigenbasisPhase& phase) {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -std::exp(-kI * phase.value()) / std::sqrt(2.0);
  return v;
}

Matrix phase_rotation(const EigenbasisPhase& phase) {
  Matrix u = Matrix::Identity(2, 2);
  u(1, 1) = std::exp(-kI * phase.value());
  return kron(u, identity(2));
}

PopulationSet eigenstate_populations(const DensityMatrix& rho, const EigenbasisPhase& phase) {
  const DensityMatrix q = qubit_register(rho);
  if (q.dim() != 4) fail(ErrorCode::kDimensionMismatch, "eigenstate populations need a two-qubit state");
  const Matrix& m = q.matrix();
  auto project = [&](const Vector& v) {
    return clamp_checked((v.adjoint() * m * v)(0).real(), 0.0, 1.0, "population");
  };
  PopulationSet p;
  p.gg = clamp_checked(m(0, 0).real(), 0.0, 1.0, "population");
  p.plus = project(psi_plus(phase));
  p.minus = project(psi_minus(phase));
  p.ee = clamp_checked(m(3, 3).real(), 0.0, 1.0, "population");
  return p;
}

Matrix pauli_operator(std::string_view word) {
  if (word.empty()) fail(ErrorCode::kInvalidArgument, "empty Pauli word");
  Matrix out = pauli(word[0]);
  for (std::size_t k = 1; k < word.size(); ++k) out = kron(out, pauli(word[k]));
  return out;
}

std::vector<std::string> all_pauli_words(int n_qubits) {
  if (n_qubits < 1) fail(ErrorCode::kInvalidArgument, "need at least one qubit");
  std::vector<std::string> words{""};
  for (int q = 0; q < n_qubits; ++q) {
    std::vector<std::string> next;
    next.reserve(words.size() * 4);
    for (const auto& w : words)
      for (char c : {'I', 'X', 'Y', 'Z'}) next.push_back(w + c);
    words = std::move(next);
  }
  return words;
}

double pauli_expectation(const DensityMatrix& rho, std::string_view word) {
  const DensityMatrix q = qubit_register(rho);
  const Matrix p = pauli_operator(word);
  if (p.rows() != q.dim()) fail(ErrorCode::kDimensionMismatch, "Pauli word length differs from qubit count");
  const Complex v = (p * q.matrix()).trace();
  if (std::abs(v.imag()) > 1e-9) fail(ErrorCode::kInternal, "Pauli expectation has an imaginary part");
  return clamp_checked(v.real(), -1.0, 1.0, "Pauli expectation");
}

std::map<std::string, double> pauli_expectations(const DensityMatrix& rho) {
  const DensityMatrix q = qubit_register(rho);
  std::map<std::string, double> out;
  for (const auto& w : all_pauli_words(q.layout().size())) out[w] = pauli_expectation(q, w);
  return out;
}

OperatorMatrix density_matrix_from_paulis(const std::map<std::string, double>& expectations) {
  if (expectations.empty()) fail(ErrorCode::kInvalidArgument, "no Pauli expectations given");
  const int n = static_cast<int>(expectations.begin()->first.size());
  const int d = 1 << n;
  Matrix rho = Matrix::Zero(d, d);
  for (const auto& w : all_pauli_words(n)) {
    auto it = expectations.find(w);
    if (it == expectations.end()) fail(ErrorCode::kInvalidArgument, "missing Pauli word " + w);
    rho += it->second * pauli_operator(w);
  }
  if (static_cast<int>(expectations.size()) != d * d)
    fail(ErrorCode::kInvalidArgument, "unexpected Pauli words in expectation map");
  return OperatorMatrix(SpaceLayout::qubits(n), rho / static_cast<double>(d));
}

EigenbasisPhase estimate_phase(const Matrix& rho) {
  if (rho.rows() != 4) fail(ErrorCode::kDimensionMismatch, "phase estimation needs a two-qubit state");
  const double two_pi = 2.0 * std::numbers::pi;
  constexpr int kGrid = 64;
  int best = 0;
  double best_value = -1.0;
  for (int k = 0; k < kGrid; ++k) {
    const double v = minus_overlap(rho, two_pi * k / kGrid);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  double a = two_pi * (best - 1) / kGrid;
  double b = two_pi * (best + 1) / kGrid;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double e = a + ratio * (b - a);
  double fc = minus_overlap(rho, c), fe = minus_overlap(rho, e);
  while (b - a > 1e-4) {
    if (fc > fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - ratio * (b - a);
      fc = minus_overlap(rho, c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + ratio * (b - a);
      fe = minus_overlap(rho, e);
    }
  }
  return EigenbasisPhase((a + b) / 2.0);
}

DensityMatrix x_state() {
  Vector phi_plus = Vector::Zero(4);
  phi_plus(0) = phi_plus(3) = 1.0 / std::sqrt(2.0);
  const Vector minus = psi_minus(EigenbasisPhase(0.0));
  Matrix rho = 0.5 * (minus * minus.adjoint()) + 0.5 * (phi_plus * phi_plus.adjoint());
  return DensityMatrix(OperatorMatrix(SpaceLayout::qubits(2), rho));
}

double state_fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) fail(ErrorCode::kDimensionMismatch, "state dimensions differ");
  const Matrix ra = matrix_sqrt_psd(a);
  const Matrix inner = ra * b * ra;
  auto eig = eig_hermitian(Matrix((inner + inner.adjoint()) / 2.0));
  const double root_sum = eig.values.cwiseMax(0.0).cwiseSqrt().sum();
  return clamp_checked(root_sum * root_sum, 0.0, 1.0, "state fidelity");
}

}  // namespace qres
