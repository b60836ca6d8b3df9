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

#include <random>

#include "qres/qlinalg.hpp"

namespace qres::test {

inline Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

// Full-rank random state G G^dagger / Tr.
inline Matrix random_density(int d, std::mt19937_64& rng) {
  const Matrix g = random_matrix(d, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace();
}

inline Matrix random_hermitian(int d, std::mt19937_64& rng) {
  const Matrix g = random_matrix(d, rng);
  return (g + g.adjoint()) / 2.0;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

}  // namespace qres::test
