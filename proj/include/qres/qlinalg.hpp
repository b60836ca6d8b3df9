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

// Dense complex linear algebra over ordered tensor-product Hilbert spaces.
//
// Basis convention: subsystems are ordered as listed in the layout and the
// first label is the most significant digit of the flat basis index. For two
// qubits this gives |q1 q2> -> 2*q1 + q2, with g = 0 and e = 1.

#include <complex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qres {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

class SpaceLayout {
 public:
  SpaceLayout() = default;
  SpaceLayout(std::vector<int> dims, std::vector<std::string> labels);

  /// Layout of `n` two-level systems labelled Q1..Qn.
  static SpaceLayout qubits(int n);

  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int size() const { return static_cast<int>(dims_.size()); }
  int total_dim() const { return total_; }

  bool contains(std::string_view label) const;
  /// Position of `label` in the ordering; throws on unknown label.
  int position(std::string_view label) const;
  int dim_of(std::string_view label) const { return dims_[position(label)]; }

  /// Sub-layout holding the given labels in their original order.
  SpaceLayout restricted(const std::set<std::string>& keep) const;

  bool operator==(const SpaceLayout& other) const = default;

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
  int total_ = 1;
};

class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(SpaceLayout layout, Matrix entries);

  static OperatorMatrix zero(const SpaceLayout& layout);
  static OperatorMatrix identity(const SpaceLayout& layout);

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  OperatorMatrix adjoint() const { return {layout_, entries_.adjoint()}; }
  Complex trace() const { return entries_.trace(); }
  /// max |A - A^dagger| elementwise.
  double hermiticity_error() const;

  OperatorMatrix& operator+=(const OperatorMatrix& rhs);
  OperatorMatrix& operator-=(const OperatorMatrix& rhs);
  OperatorMatrix& operator*=(Complex s);

  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
  friend OperatorMatrix operator*(OperatorMatrix a, Complex s) { return a *= s; }
  friend OperatorMatrix operator*(Complex s, OperatorMatrix a) { return a *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  SpaceLayout layout_;
  Matrix entries_;
};

/// Hermitian, unit-trace, positive semidefinite state.
class DensityMatrix {
 public:
  struct Tolerance {
    double hermiticity = 1e-10;
    double trace = 1e-9;
    double min_eigenvalue = -1e-8;
  };

  DensityMatrix() = default;
  /// Validates the invariants; throws Error otherwise.
  explicit DensityMatrix(OperatorMatrix op) : DensityMatrix(std::move(op), Tolerance{}) {}
  DensityMatrix(OperatorMatrix op, const Tolerance& tol);

  /// |psi><psi| for a normalized ket.
  static DensityMatrix pure(const SpaceLayout& layout, const Vector& ket);
  /// Symmetrizes (A + A^dagger)/2 and rescales to unit trace, then validates.
  static DensityMatrix hermitized(const OperatorMatrix& op, const Tolerance& tol);

  const OperatorMatrix& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const SpaceLayout& layout() const { return op_.layout(); }
  int dim() const { return op_.dim(); }
  double min_eigenvalue() const;

 private:
  OperatorMatrix op_;
};

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // column k pairs with values[k]
};

// Single-site operators.
Matrix identity(int dim);
Matrix annihilation(int dim);
Matrix creation(int dim);
Matrix number(int dim);
Matrix pauli(char letter);

Matrix kron(const Matrix& a, const Matrix& b);

/// Id x ... x local x ... x Id on `layout`, with `local` placed at `site`.
OperatorMatrix embed(const Matrix& local, std::string_view site, const SpaceLayout& layout);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<std::string>& keep);
/// Partial trace of an arbitrary operator; no state invariants are checked.
OperatorMatrix partial_trace(const OperatorMatrix& op, const std::set<std::string>& keep);

/// Eigen-decomposition of a Hermitian operator (input checked to 1e-9).
HermitianEigen eig_hermitian(const Matrix& h);
HermitianEigen eig_hermitian(const OperatorMatrix& h);

/// Computational-basis ket for per-subsystem level indices.
Vector basis_ket(const SpaceLayout& layout, const std::vector<int>& levels);

/// Trace distance (1/2)||a - b||_1 of two Hermitian matrices.
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace qres
