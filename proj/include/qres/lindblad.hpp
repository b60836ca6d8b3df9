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

// Lindblad master-equation integration and steady-state solvers.
//
// Density matrices are vectorized column-major: vec(rho)[i + j*d] = rho(i, j),
// matching Eigen's default storage so a d x d matrix maps onto a d^2 vector.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "qres/model.hpp"
#include "qres/qlinalg.hpp"

namespace qres {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// L rho L^dagger - (1/2){L^dagger L, rho}.
OperatorMatrix dissipator(const OperatorMatrix& jump, const OperatorMatrix& rho);
OperatorMatrix dissipator(const OperatorMatrix& jump, const DensityMatrix& rho);

/// drho/dt = -i[H(t), rho] + sum_m D[L_m] rho, evaluated densely.
Matrix lindblad_rhs(const LiouvillianModel& model, double t, const Matrix& rho);

/// Time-dependent generator L(t) = L0 + sum_k (e^{-i w_k t} S_k + e^{+i w_k t} S_k^+).
struct Superoperator {
  int dim = 0;  // Hilbert-space dimension d; matrices are d^2 x d^2
  SparseMatrix static_part;
  struct Harmonic {
    double frequency = 0.0;
    SparseMatrix forward;   // multiplies e^{-i w t}
    SparseMatrix backward;  // multiplies e^{+i w t}
  };
  std::vector<Harmonic> harmonics;

  bool is_static() const { return harmonics.empty(); }
  /// Largest |w_k|, 0 for static generators.
  double max_frequency() const;
};

/// Built column by column by applying the generator to basis matrices |i><j|.
Superoperator build_superoperator(const LiouvillianModel& model);

/// Index sets closed under the generator (weak-symmetry blocks). Each entry
/// lists vectorized indices in ascending order.
std::vector<std::vector<int>> invariant_blocks(const Superoperator& sup);

struct EvolveOptions {
  double dt_max = 0.5e-9;            // s
  int record_stride = 1;             // record every n-th step (0 records only the final state)
  std::int64_t max_steps = 50'000'000;
  double steps_per_period = 50.0;    // step <= period of fastest frequency / this
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  DensityMatrix final_state;
  double dt = 0.0;
  std::int64_t steps = 0;
  double max_trace_drift = 0.0;
};

/// Fastest frequency scale of the model: spectral radius of H_static plus
/// oscillating amplitudes, and the oscillation frequencies themselves.
double max_angular_frequency(const LiouvillianModel& model);

/// Fixed-step RK4 over [0, t_final].
EvolutionResult evolve(const LiouvillianModel& model, const DensityMatrix& rho0, double t_final,
                       const EvolveOptions& options = {});

/// Same integration with a caller-supplied observer instead of stored states.
/// `observe(t, rho)` is called at every record point with a Hermitized state.
DensityMatrix evolve_observed(const LiouvillianModel& model, const DensityMatrix& rho0, double t_final,
                              const EvolveOptions& options,
                              const std::function<void(double, const DensityMatrix&)>& observe);

/// Reruns at dt/2 and returns the trace distance between the two final states.
double evolve_convergence_delta(const LiouvillianModel& model, const DensityMatrix& rho0, double t_final,
                                const EvolveOptions& options = {});

struct SteadyStateInfo {
  double residual = 0.0;         // ||L(rho)||_2
  double generator_norm = 0.0;   // ||L||_2 estimate
  double conditioning = 0.0;     // smallest relative singular value of the bordered system
  int block_size = 0;
};

/// Unique null vector of the static Liouvillian, Hermitized and trace normalized.
/// Throws kDegenerateKernel when the kernel is not one-dimensional.
DensityMatrix steady_state(const LiouvillianModel& model, SteadyStateInfo* info = nullptr);

struct PeriodicOptions {
  double tolerance = 1e-6;   // trace distance between successive period averages
  double time_cap = 200e-6;  // s
  EvolveOptions evolve;
};

struct PeriodicInfo {
  int periods = 0;
  double last_delta = 0.0;
  double simulated_time = 0.0;
};

/// Period-averaged asymptotic state of a periodically driven model.
DensityMatrix steady_state_periodic(const LiouvillianModel& model, double period, const PeriodicOptions& options = {},
                                    PeriodicInfo* info = nullptr);

/// 2 pi / gcd of the oscillation frequencies (tolerance 1e-9 relative). Throws
/// for static models and incommensurate sets.
double common_period(const LiouvillianModel& model);

}  // namespace qres
