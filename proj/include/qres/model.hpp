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

#include <string>
#include <vector>

#include "qres/qlinalg.hpp"

namespace qres {

/// Hamiltonian term `op * exp(-i w t) + h.c.`.
struct OscillatingTerm {
  OperatorMatrix op;
  double frequency = 0.0;  // rad/s, signed
};

/// Complete open-system description: H(t) = H_static + sum of oscillating
/// terms, dissipators D[L] for each jump operator (rates folded into L).
struct LiouvillianModel {
  OperatorMatrix h_static;
  std::vector<OscillatingTerm> oscillating;
  std::vector<OperatorMatrix> jumps;
  std::vector<std::string> jump_labels;
  std::vector<std::string> warnings;

  const SpaceLayout& layout() const { return h_static.layout(); }
  int dim() const { return h_static.dim(); }
  bool is_static() const { return oscillating.empty(); }

  /// Throws unless H_static is Hermitian to 1e-10 and every operator shares the layout.
  void validate() const;
  Matrix hamiltonian_at(double t) const;
  void add_jump(std::string label, OperatorMatrix op);
};

}  // namespace qres
