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

#include "qres/model.hpp"

#include <cmath>

#include "qres/error.hpp"

namespace qres {

void LiouvillianModel::validate() const {
  const double herm = h_static.hermiticity_error();
  if (herm > 1e-10 * std::max(1.0, h_static.matrix().cwiseAbs().maxCoeff()))
    fail(ErrorCode::kNotHermitian, "static Hamiltonian is not Hermitian");
  for (const auto& term : oscillating)
    if (!(term.op.layout() == layout())) fail(ErrorCode::kDimensionMismatch, "oscillating term layout mismatch");
  for (const auto& jump : jumps)
    if (!(jump.layout() == layout())) fail(ErrorCode::kDimensionMismatch, "jump operator layout mismatch");
  if (jump_labels.size() != jumps.size()) fail(ErrorCode::kInternal, "jump labels out of sync");
}

Matrix LiouvillianModel::hamiltonian_at(double t) const {
  Matrix h = h_static.matrix();
  for (const auto& term : oscillating) {
    const Complex phase = std::exp(-kI * term.frequency * t);
    h += phase * term.op.matrix() + std::conj(phase) * term.op.matrix().adjoint();
  }
  return h;
}

void LiouvillianModel::add_jump(std::string label, OperatorMatrix op) {
  if (h_static.dim() != 0 && !(op.layout() == layout()))
    fail(ErrorCode::kDimensionMismatch, "jump operator layout mismatch");
  jump_labels.push_back(std::move(label));
  jumps.push_back(std::move(op));
}

}  // namespace qres
