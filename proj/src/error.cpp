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

#include "qres/error.hpp"

namespace qres {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kNotHermitian: return "not_hermitian";
    case ErrorCode::kDegenerateKernel: return "degenerate_kernel";
    case ErrorCode::kNotConverged: return "not_converged";
    case ErrorCode::kBudgetExceeded: return "budget_exceeded";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kNoiseTooStrong: return "noise_too_strong";
    case ErrorCode::kSingularMatrix: return "singular_matrix";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace qres
