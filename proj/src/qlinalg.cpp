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

#include "qres/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "qres/error.hpp"

namespace qres {

SpaceLayout::SpaceLayout(std::vector<int> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.empty()) fail(ErrorCode::kInvalidArgument, "layout needs at least one subsystem");
  if (dims_.size() != labels_.size())
    fail(ErrorCode::kInvalidArgument, "layout dims and labels differ in length");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 2)
      fail(ErrorCode::kInvalidArgument, "subsystem '" + labels_[i] + "' has dimension < 2");
    if (!seen.insert(labels_[i]).second)
      fail(ErrorCode::kInvalidArgument, "duplicate subsystem label '" + labels_[i] + "'");
    total_ *= dims_[i];
  }
}

SpaceLayout SpaceLayout::qubits(int n) {
  std::vector<int> dims(n, 2);
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("Q" + std::to_string(i));
  return {std::move(dims), std::move(labels)};
}

bool SpaceLayout::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int SpaceLayout::position(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    fail(ErrorCode::kInvalidArgument, "unknown subsystem label '" + std::string(label) + "'");
  return static_cast<int>(it - labels_.begin());
}

SpaceLayout SpaceLayout::restricted(const std::set<std::string>& keep) const {
  std::vector<int> dims;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (keep.count(labels_[i])) {
      dims.push_back(dims_[i]);
      labels.push_back(labels_[i]);
    }
  }
  return {std::move(dims), std::move(labels)};
}

OperatorMatrix::OperatorMatrix(SpaceLayout layout, Matrix entries)
    : layout_(std::move(layout)), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    fail(ErrorCode::kDimensionMismatch, "operator matrix is not square");
  if (entries_.rows() != layout_.total_dim())
    fail(ErrorCode::kDimensionMismatch,
         "operator dimension " + std::to_string(entries_.rows()) + " does not match layout dimension " +
             std::to_string(layout_.total_dim()));
}

OperatorMatrix OperatorMatrix::zero(const SpaceLayout& layout) {
  return {layout, Matrix::Zero(layout.total_dim(), layout.total_dim())};
}

OperatorMatrix OperatorMatrix::identity(const SpaceLayout& layout) {
  return {layout, Matrix::Identity(layout.total_dim(), layout.total_dim())};
}

double OperatorMatrix::hermiticity_error() const {
  if (entries_.size() == 0) return 0.0;
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
  if (!(layout_ == rhs.layout_)) fail(ErrorCode::kDimensionMismatch, "operator layouts differ");
  entries_ += rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
  if (!(layout_ == rhs.layout_)) fail(ErrorCode::kDimensionMismatch, "operator layouts differ");
  entries_ -= rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex s) {
  entries_ *= s;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.layout() == b.layout())) fail(ErrorCode::kDimensionMismatch, "operator layouts differ");
  return {a.layout(), a.matrix() * b.matrix()};
}

DensityMatrix::DensityMatrix(OperatorMatrix op, const Tolerance& tol) : op_(std::move(op)) {
  const double herm = op_.hermiticity_error();
  if (herm > tol.hermiticity)
    fail(ErrorCode::kNotHermitian, "density matrix not Hermitian (error " + std::to_string(herm) + ")");
  const double tr_err = std::abs(op_.trace() - Complex(1.0, 0.0));
  if (tr_err > tol.trace)
    fail(ErrorCode::kInvalidArgument, "density matrix trace differs from 1 by " + std::to_string(tr_err));
  const double lmin = min_eigenvalue();
  if (lmin < tol.min_eigenvalue)
    fail(ErrorCode::kInvalidArgument, "density matrix has eigenvalue " + std::to_string(lmin));
}

DensityMatrix DensityMatrix::pure(const SpaceLayout& layout, const Vector& ket) {
  if (ket.size() != layout.total_dim()) fail(ErrorCode::kDimensionMismatch, "ket dimension mismatch");
  const double norm = ket.norm();
  if (std::abs(norm - 1.0) > 1e-9) fail(ErrorCode::kInvalidArgument, "ket is not normalized");
  return DensityMatrix(OperatorMatrix(layout, ket * ket.adjoint()));
}

DensityMatrix DensityMatrix::hermitized(const OperatorMatrix& op, const Tolerance& tol) {
  Matrix m = 0.5 * (op.matrix() + op.matrix().adjoint());
  const Complex tr = m.trace();
  if (std::abs(tr) < 1e-300) fail(ErrorCode::kInvalidArgument, "cannot normalize a traceless operator");
  m /= tr.real();
  return DensityMatrix(OperatorMatrix(op.layout(), std::move(m)), tol);
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op_.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix annihilation(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix creation(int dim) { return annihilation(dim).adjoint(); }

Matrix number(int dim) {
  Matrix n = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Matrix pauli(char letter) {
  Matrix p(2, 2);
  switch (letter) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, -kI, kI, 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: fail(ErrorCode::kInvalidArgument, std::string("invalid Pauli letter '") + letter + "'");
  }
  return p;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

OperatorMatrix embed(const Matrix& local, std::string_view site, const SpaceLayout& layout) {
  const int pos = layout.position(site);
  if (local.rows() != layout.dims()[pos] || local.cols() != layout.dims()[pos])
    fail(ErrorCode::kDimensionMismatch, "local operator dimension does not match subsystem '" +
                                            std::string(site) + "'");
  // Id_left x local x Id_right without materializing the outer products.
  int left = 1;
  for (int i = 0; i < pos; ++i) left *= layout.dims()[i];
  const int right = layout.total_dim() / (left * layout.dims()[pos]);
  return {layout, kron(kron(identity(left), local), identity(right))};
}

namespace {

// Maps (kept index, traced index) to the flat index of the full space.
std::vector<std::vector<int>> split_index_table(const SpaceLayout& layout, const std::vector<bool>& kept,
                                                int kept_dim, int traced_dim) {
  std::vector<std::vector<int>> table(kept_dim, std::vector<int>(traced_dim));
  const int n = layout.size();
  std::vector<int> digits(n, 0);
  for (int flat = 0; flat < layout.total_dim(); ++flat) {
    int rem = flat;
    for (int s = n - 1; s >= 0; --s) {
      digits[s] = rem % layout.dims()[s];
      rem /= layout.dims()[s];
    }
    int k = 0, t = 0;
    for (int s = 0; s < n; ++s) {
      if (kept[s])
        k = k * layout.dims()[s] + digits[s];
      else
        t = t * layout.dims()[s] + digits[s];
    }
    table[k][t] = flat;
  }
  return table;
}

}  // namespace

OperatorMatrix partial_trace(const OperatorMatrix& op, const std::set<std::string>& keep) {
  if (keep.empty()) fail(ErrorCode::kInvalidArgument, "partial trace needs a non-empty keep set");
  const SpaceLayout& layout = op.layout();
  for (const auto& label : keep) layout.position(label);
  std::vector<bool> kept(layout.size());
  int kept_dim = 1;
  for (int s = 0; s < layout.size(); ++s) {
    kept[s] = keep.count(layout.labels()[s]) > 0;
    if (kept[s]) kept_dim *= layout.dims()[s];
  }
  const int traced_dim = layout.total_dim() / kept_dim;
  const auto table = split_index_table(layout, kept, kept_dim, traced_dim);
  Matrix reduced = Matrix::Zero(kept_dim, kept_dim);
  const Matrix& m = op.matrix();
  for (int i = 0; i < kept_dim; ++i)
    for (int j = 0; j < kept_dim; ++j) {
      Complex acc = 0.0;
      for (int t = 0; t < traced_dim; ++t) acc += m(table[i][t], table[j][t]);
      reduced(i, j) = acc;
    }
  return {layout.restricted(keep), std::move(reduced)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<std::string>& keep) {
  DensityMatrix::Tolerance tol;
  tol.min_eigenvalue = -1e-6;
  tol.trace = 1e-7;
  return DensityMatrix(partial_trace(rho.op(), keep), tol);
}

HermitianEigen eig_hermitian(const Matrix& h) {
  if (h.rows() != h.cols()) fail(ErrorCode::kDimensionMismatch, "eigensolver input is not square");
  if (h.size() > 0) {
    const double err = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (err > 1e-9) fail(ErrorCode::kNotHermitian, "eigensolver input not Hermitian (error " + std::to_string(err) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) fail(ErrorCode::kInternal, "Hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianEigen eig_hermitian(const OperatorMatrix& h) { return eig_hermitian(h.matrix()); }

Vector basis_ket(const SpaceLayout& layout, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != layout.size())
    fail(ErrorCode::kDimensionMismatch, "basis ket needs one level per subsystem");
  int flat = 0;
  for (int s = 0; s < layout.size(); ++s) {
    if (levels[s] < 0 || levels[s] >= layout.dims()[s])
      fail(ErrorCode::kInvalidArgument, "level out of range for subsystem '" + layout.labels()[s] + "'");
    flat = flat * layout.dims()[s] + levels[s];
  }
  Vector ket = Vector::Zero(layout.total_dim());
  ket(flat) = 1.0;
  return ket;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  Matrix diff = a - b;
  diff = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace qres
