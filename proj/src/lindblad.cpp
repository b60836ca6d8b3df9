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

#include "qres/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

#include <Eigen/SparseLU>

#include "qres/error.hpp"

namespace qres {

OperatorMatrix dissipator(const OperatorMatrix& jump, const OperatorMatrix& rho) {
  if (!(jump.layout() == rho.layout())) fail(ErrorCode::kDimensionMismatch, "dissipator layouts differ");
  const Matrix& l = jump.matrix();
  const Matrix& r = rho.matrix();
  const Matrix ldl = l.adjoint() * l;
  return {rho.layout(), l * r * l.adjoint() - 0.5 * (ldl * r + r * ldl)};
}

OperatorMatrix dissipator(const OperatorMatrix& jump, const DensityMatrix& rho) { return dissipator(jump, rho.op()); }

Matrix lindblad_rhs(const LiouvillianModel& model, double t, const Matrix& rho) {
  const Matrix h = model.hamiltonian_at(t);
  Matrix out = -kI * (h * rho - rho * h);
  for (const auto& jump : model.jumps) {
    const Matrix& l = jump.matrix();
    const Matrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

double Superoperator::max_frequency() const {
  double w = 0.0;
  for (const auto& h : harmonics) w = std::max(w, std::abs(h.frequency));
  return w;
}

namespace {

using Triplet = Eigen::Triplet<Complex>;

struct SparseColumns {
  // Nonzero (row, value) pairs for each column of an operator.
  std::vector<std::vector<std::pair<int, Complex>>> cols;

  explicit SparseColumns(const Matrix& m) : cols(m.cols()) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (m(i, j) != Complex(0.0)) cols[j].emplace_back(static_cast<int>(i), m(i, j));
  }
};

SparseMatrix from_triplets(int n, std::vector<Triplet>& triplets) {
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(Complex(0.0));
  m.makeCompressed();
  return m;
}

// Generator of -i[A, .] applied to every |i><j|: column (i + j d) holds
// -i A|i><j| + i |i><j|A.
SparseMatrix commutator_superoperator(const Matrix& a) {
  const int d = static_cast<int>(a.rows());
  const SparseColumns acol(a);
  const SparseColumns arow(a.transpose());  // rows of A as columns
  std::vector<Triplet> triplets;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      const int col = i + j * d;
      for (const auto& [r, v] : acol.cols[i]) triplets.emplace_back(r + j * d, col, -kI * v);
      for (const auto& [c, v] : arow.cols[j]) triplets.emplace_back(i + c * d, col, kI * v);
    }
  return from_triplets(d * d, triplets);
}

// Row-restricted copy of `m` on the index set `keep` (closed under m).
SparseMatrix restrict(const SparseMatrix& m, const std::vector<int>& keep, const std::vector<int>& local) {
  const int n = static_cast<int>(keep.size());
  std::vector<Triplet> triplets;
  for (int r = 0; r < n; ++r)
    for (SparseMatrix::InnerIterator it(m, keep[r]); it; ++it) {
      const int c = local[it.col()];
      if (c < 0) fail(ErrorCode::kInternal, "block is not closed under the generator");
      triplets.emplace_back(r, c, it.value());
    }
  return from_triplets(n, triplets);
}

struct RestrictedGenerator {
  std::vector<int> keep;
  SparseMatrix static_part;
  struct Harmonic {
    double frequency;
    SparseMatrix forward;
    SparseMatrix backward;
  };
  std::vector<Harmonic> harmonics;

  void apply(double t, const Vector& x, Vector& out) const {
    out.noalias() = static_part * x;
    for (const auto& h : harmonics) {
      const Complex phase = std::exp(-kI * h.frequency * t);
      out.noalias() += phase * (h.forward * x);
      out.noalias() += std::conj(phase) * (h.backward * x);
    }
  }
};

RestrictedGenerator restrict_to_support(const Superoperator& sup, const Vector& v0) {
  const auto blocks = invariant_blocks(sup);
  RestrictedGenerator gen;
  for (const auto& block : blocks) {
    const bool touched = std::any_of(block.begin(), block.end(), [&](int k) { return v0(k) != Complex(0.0); });
    if (touched) gen.keep.insert(gen.keep.end(), block.begin(), block.end());
  }
  std::sort(gen.keep.begin(), gen.keep.end());
  std::vector<int> local(v0.size(), -1);
  for (std::size_t k = 0; k < gen.keep.size(); ++k) local[gen.keep[k]] = static_cast<int>(k);
  gen.static_part = restrict(sup.static_part, gen.keep, local);
  for (const auto& h : sup.harmonics)
    gen.harmonics.push_back({h.frequency, restrict(h.forward, gen.keep, local), restrict(h.backward, gen.keep, local)});
  return gen;
}

Vector vectorize(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix scatter(const Vector& x, const std::vector<int>& keep, int d) {
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < keep.size(); ++k) m.data()[keep[k]] = x(k);
  return m;
}

DensityMatrix hermitian_state(const SpaceLayout& layout, const Matrix& m, double trace_tol, double positivity_tol) {
  DensityMatrix::Tolerance tol;
  tol.trace = trace_tol;
  tol.min_eigenvalue = positivity_tol;
  return DensityMatrix(OperatorMatrix(layout, 0.5 * (m + m.adjoint())), tol);
}

double step_size(const LiouvillianModel& model, const EvolveOptions& options) {
  const double w = max_angular_frequency(model);
  double dt = options.dt_max;
  if (w > 0.0) dt = std::min(dt, 2.0 * std::numbers::pi / (options.steps_per_period * w));
  if (!(dt > 0.0)) fail(ErrorCode::kInvalidArgument, "time step must be positive");
  return dt;
}

struct Integrator {
  const RestrictedGenerator& gen;
  Vector k1, k2, k3, k4, tmp;

  explicit Integrator(const RestrictedGenerator& g) : gen(g) {
    const auto n = static_cast<Eigen::Index>(g.keep.size());
    k1.resize(n); k2.resize(n); k3.resize(n); k4.resize(n); tmp.resize(n);
  }

  void step(double t, double dt, Vector& x) {
    gen.apply(t, x, k1);
    tmp = x + (0.5 * dt) * k1;
    gen.apply(t + 0.5 * dt, tmp, k2);
    tmp = x + (0.5 * dt) * k2;
    gen.apply(t + 0.5 * dt, tmp, k3);
    tmp = x + dt * k3;
    gen.apply(t + dt, tmp, k4);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

Complex restricted_trace(const Vector& x, const std::vector<int>& keep, int d) {
  Complex tr = 0.0;
  for (std::size_t k = 0; k < keep.size(); ++k)
    if (keep[k] % (d + 1) == 0) tr += x(k);
  return tr;
}

constexpr double kTraceDriftLimit = 1e-7;
constexpr double kRk4Positivity = -1e-6;

}  // namespace

Superoperator build_superoperator(const LiouvillianModel& model) {
  model.validate();
  const int d = model.dim();
  Superoperator sup;
  sup.dim = d;

  Matrix k = Matrix::Zero(d, d);
  for (const auto& jump : model.jumps) k += jump.matrix().adjoint() * jump.matrix();
  // -i(H_eff rho - rho H_eff^dagger) with H_eff = H - (i/2) sum L^dagger L.
  const Matrix heff = model.h_static.matrix() - 0.5 * kI * k;
  const SparseColumns hcol(heff);
  const SparseColumns hadj_row(heff.conjugate());  // column j of conj(H_eff) = row j of H_eff^dagger
  std::vector<SparseColumns> lcols;
  for (const auto& jump : model.jumps) lcols.emplace_back(jump.matrix());

  std::vector<Triplet> triplets;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      const int col = i + j * d;
      for (const auto& [r, v] : hcol.cols[i]) triplets.emplace_back(r + j * d, col, -kI * v);
      for (const auto& [c, v] : hadj_row.cols[j]) triplets.emplace_back(i + c * d, col, kI * v);
      for (const auto& l : lcols)
        for (const auto& [r, vr] : l.cols[i])
          for (const auto& [c, vc] : l.cols[j]) triplets.emplace_back(r + c * d, col, vr * std::conj(vc));
    }
  sup.static_part = from_triplets(d * d, triplets);

  for (const auto& term : model.oscillating) {
    sup.harmonics.push_back({term.frequency, commutator_superoperator(term.op.matrix()),
                             commutator_superoperator(term.op.matrix().adjoint())});
  }
  return sup;
}

std::vector<std::vector<int>> invariant_blocks(const Superoperator& sup) {
  const int n = sup.dim * sup.dim;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](const SparseMatrix& m) {
    for (int r = 0; r < m.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
        const int a = find(r), b = find(static_cast<int>(it.col()));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  };
  unite(sup.static_part);
  for (const auto& h : sup.harmonics) {
    unite(h.forward);
    unite(h.backward);
  }
  std::vector<int> slot(n, -1);
  std::vector<std::vector<int>> blocks;
  for (int k = 0; k < n; ++k) {
    const int root = find(k);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(k);
  }
  return blocks;
}

double max_angular_frequency(const LiouvillianModel& model) {
  const auto eig = eig_hermitian(model.h_static.matrix());
  double w = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  for (const auto& term : model.oscillating) {
    Eigen::JacobiSVD<Matrix> svd(term.op.matrix());
    w += 2.0 * svd.singularValues()(0);
  }
  for (const auto& term : model.oscillating) w = std::max(w, std::abs(term.frequency));
  return w;
}

DensityMatrix evolve_observed(const LiouvillianModel& model, const DensityMatrix& rho0, double t_final,
                              const EvolveOptions& options,
                              const std::function<void(double, const DensityMatrix&)>& observe) {
  if (!(t_final > 0.0)) fail(ErrorCode::kInvalidArgument, "t_final must be > 0");
  if (!(rho0.layout() == model.layout())) fail(ErrorCode::kDimensionMismatch, "initial state layout mismatch");
  const double dt_limit = step_size(model, options);
  const double steps_real = std::ceil(t_final / dt_limit - 1e-9);
  if (steps_real > static_cast<double>(options.max_steps))
    fail(ErrorCode::kBudgetExceeded, "evolution needs " + std::to_string(static_cast<long long>(steps_real)) +
                                         " steps, budget is " + std::to_string(options.max_steps));
  const auto steps = static_cast<std::int64_t>(std::max(1.0, steps_real));
  const double dt = t_final / static_cast<double>(steps);

  const int d = model.dim();
  const Superoperator sup = build_superoperator(model);
  const Vector full0 = vectorize(rho0.matrix());
  const RestrictedGenerator gen = restrict_to_support(sup, full0);
  Vector x(gen.keep.size());
  for (std::size_t k = 0; k < gen.keep.size(); ++k) x(k) = full0(gen.keep[k]);

  auto record = [&](double t) {
    const double drift = std::abs(restricted_trace(x, gen.keep, d) - Complex(1.0));
    if (drift > kTraceDriftLimit)
      fail(ErrorCode::kInternal, "trace drift " + std::to_string(drift) + " exceeds 1e-7 at t = " + std::to_string(t));
    DensityMatrix state = hermitian_state(model.layout(), scatter(x, gen.keep, d), kTraceDriftLimit, kRk4Positivity);
    if (observe) observe(t, state);
    return state;
  };

  if (options.record_stride > 0) record(0.0);
  Integrator rk(gen);
  for (std::int64_t s = 0; s < steps; ++s) {
    rk.step(static_cast<double>(s) * dt, dt, x);
    const bool last = s + 1 == steps;
    if (!last && options.record_stride > 0 && (s + 1) % options.record_stride == 0)
      record(static_cast<double>(s + 1) * dt);
  }
  return record(t_final);
}

EvolutionResult evolve(const LiouvillianModel& model, const DensityMatrix& rho0, double t_final,
                       const EvolveOptions& options) {
  EvolutionResult result;
  result.dt = t_final / std::max(1.0, std::ceil(t_final / step_size(model, options) - 1e-9));
  result.final_state = evolve_observed(model, rho0, t_final, options, [&](double t, const DensityMatrix& rho) {
    result.times.push_back(t);
    result.states.push_back(rho);
    result.max_trace_drift = std::max(result.max_trace_drift, std::abs(rho.op().trace() - Complex(1.0)));
  });
  result.steps = static_cast<std::int64_t>(std::llround(t_final / result.dt));
  if (options.record_stride <= 0) {
    result.times.assign(1, t_final);
    result.states.assign(1, result.final_state);
  }
  return result;
}

double evolve_convergence_delta(const LiouvillianModel& model, const DensityMatrix& rho0, double t_final,
                                const EvolveOptions& options) {
  EvolveOptions coarse = options;
  coarse.record_stride = 0;
  const double dt = step_size(model, coarse);
  EvolveOptions fine = coarse;
  fine.dt_max = 0.5 * dt;
  fine.max_steps = 2 * options.max_steps;
  coarse.dt_max = dt;
  const DensityMatrix a = evolve_observed(model, rho0, t_final, coarse, {});
  const DensityMatrix b = evolve_observed(model, rho0, t_final, fine, {});
  return trace_distance(a.matrix(), b.matrix());
}

namespace {

double generator_norm(const SparseMatrix& l) {
  // Power iteration on L^dagger L; deterministic start vector.
  Vector v(l.cols());
  for (Eigen::Index k = 0; k < v.size(); ++k)
    v(k) = Complex(std::sin(1.0 + 0.7 * static_cast<double>(k)), std::cos(0.3 * static_cast<double>(k)));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 60; ++it) {
    Vector w = l.adjoint() * (l * v);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    const double next = std::sqrt(n);
    v = w / n;
    if (it > 5 && std::abs(next - sigma) <= 1e-6 * next) return next;
    sigma = next;
  }
  return sigma;
}

// Smallest singular value of A from an LU factorization, by inverse iteration
// on (A A^dagger)^{-1}.
double smallest_singular_value(Eigen::SparseLU<Eigen::SparseMatrix<Complex>>& lu, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = Complex(1.0 + 0.01 * static_cast<double>(k % 7), 0.1 * static_cast<double>(k % 3));
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 40; ++it) {
    Vector w = lu.adjoint().solve(v);
    w = lu.solve(w);
    const double n2 = w.norm();
    if (!std::isfinite(n2) || n2 == 0.0) return 0.0;
    const double next = 1.0 / std::sqrt(n2);
    v = w / n2;
    if (it > 3 && std::abs(next - estimate) <= 1e-4 * next) return next;
    estimate = next;
  }
  return estimate;
}

constexpr double kDegeneracyThreshold = 1e-10;
constexpr double kResidualLimit = 1e-8;

}  // namespace

DensityMatrix steady_state(const LiouvillianModel& model, SteadyStateInfo* info) {
  if (!model.is_static()) fail(ErrorCode::kInvalidArgument, "steady_state needs a static model");
  const int d = model.dim();
  const Superoperator sup = build_superoperator(model);
  const SparseMatrix& l = sup.static_part;
  const double norm = generator_norm(l);
  if (norm == 0.0) fail(ErrorCode::kDegenerateKernel, "generator vanishes; every state is stationary");

  const auto blocks = invariant_blocks(sup);
  std::vector<int> block_of(d * d, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int k : blocks[b]) block_of[k] = static_cast<int>(b);
  int populated = -1;
  for (int i = 0; i < d; ++i) {
    const int b = block_of[i + i * d];
    if (populated < 0) populated = b;
    if (b != populated)
      fail(ErrorCode::kDegenerateKernel, "populations split into disconnected sectors; steady state not unique");
  }

  using ColSparse = Eigen::SparseMatrix<Complex>;
  std::vector<int> local(d * d, -1);
  auto restricted_block = [&](const std::vector<int>& block) {
    for (std::size_t k = 0; k < block.size(); ++k) local[block[k]] = static_cast<int>(k);
    ColSparse m = ColSparse(restrict(l, block, local)) / norm;
    return m;
  };

  // Populated block: replace the first population row by the trace condition.
  const std::vector<int>& block = blocks[populated];
  ColSparse a = restricted_block(block);
  const int pivot_row = local[0];
  std::vector<Triplet> triplets;
  for (int c = 0; c < a.outerSize(); ++c)
    for (ColSparse::InnerIterator it(a, c); it; ++it)
      if (it.row() != pivot_row) triplets.emplace_back(static_cast<int>(it.row()), c, it.value());
  for (std::size_t k = 0; k < block.size(); ++k)
    if (block[k] % (d + 1) == 0) triplets.emplace_back(pivot_row, static_cast<int>(k), Complex(1.0));
  ColSparse bordered(a.rows(), a.cols());
  bordered.setFromTriplets(triplets.begin(), triplets.end());
  bordered.makeCompressed();

  Eigen::SparseLU<ColSparse> lu;
  lu.compute(bordered);
  if (lu.info() != Eigen::Success)
    fail(ErrorCode::kDegenerateKernel, "Liouvillian kernel is not one-dimensional (singular bordered system)");
  const double sigma = smallest_singular_value(lu, bordered.rows());
  if (sigma < kDegeneracyThreshold)
    fail(ErrorCode::kDegenerateKernel,
         "Liouvillian kernel is not one-dimensional (relative singular value " + std::to_string(sigma) + ")");
  Vector rhs = Vector::Zero(bordered.rows());
  rhs(pivot_row) = 1.0;
  const Vector x = lu.solve(rhs);

  // Coherence sectors must not carry stationary states of their own. A block
  // and its mirror (i,j) <-> (j,i) are conjugate, so one check covers both.
  std::vector<bool> checked(blocks.size(), false);
  checked[populated] = true;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (checked[b]) continue;
    const int first = blocks[b].front();
    checked[b] = true;
    checked[block_of[(first / d) + (first % d) * d]] = true;
    ColSparse m = restricted_block(blocks[b]);
    m.makeCompressed();
    Eigen::SparseLU<ColSparse> blu;
    blu.compute(m);
    if (blu.info() != Eigen::Success || smallest_singular_value(blu, m.rows()) < kDegeneracyThreshold)
      fail(ErrorCode::kDegenerateKernel, "Liouvillian has a stationary coherence; steady state not unique");
  }

  Matrix rho = scatter(x, block, d);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  const double residual = (l * vectorize(rho)).norm();
  if (info) *info = {residual, norm, sigma, static_cast<int>(block.size())};
  if (residual > kResidualLimit * norm)
    fail(ErrorCode::kNotConverged, "steady-state residual " + std::to_string(residual / norm) + " exceeds 1e-8");
  return DensityMatrix(OperatorMatrix(model.layout(), std::move(rho)));
}

double common_period(const LiouvillianModel& model) {
  if (model.is_static()) fail(ErrorCode::kInvalidArgument, "static model has no period");
  double g = 0.0;
  for (const auto& term : model.oscillating) {
    double b = std::abs(term.frequency);
    double a = g;
    if (a == 0.0) {
      g = b;
      continue;
    }
    const double scale = std::max(a, b);
    while (b > 1e-9 * scale) {
      double r = std::fmod(a, b);
      if (b - r < 1e-9 * scale) r = 0.0;
      a = b;
      b = r;
    }
    if (a < 1e-6 * scale) fail(ErrorCode::kInvalidArgument, "oscillation frequencies are incommensurate");
    g = a;
  }
  if (g == 0.0) fail(ErrorCode::kInvalidArgument, "oscillating terms have zero frequency");
  return 2.0 * std::numbers::pi / g;
}

DensityMatrix steady_state_periodic(const LiouvillianModel& model, double period, const PeriodicOptions& options,
                                    PeriodicInfo* info) {
  if (!(period > 0.0)) fail(ErrorCode::kInvalidArgument, "period must be > 0");
  const int d = model.dim();
  const double dt_limit = step_size(model, options.evolve);
  const auto per_period = static_cast<std::int64_t>(std::max(1.0, std::ceil(period / dt_limit - 1e-9)));
  const double dt = period / static_cast<double>(per_period);
  const auto max_periods = static_cast<std::int64_t>(std::ceil(options.time_cap / period));
  if (per_period * max_periods > options.evolve.max_steps && per_period > options.evolve.max_steps)
    fail(ErrorCode::kBudgetExceeded, "one period exceeds the step budget");

  const Superoperator sup = build_superoperator(model);
  std::vector<int> ground(model.layout().size(), 0);
  const Vector ket = basis_ket(model.layout(), ground);
  const Vector full0 = vectorize(ket * ket.adjoint());
  const RestrictedGenerator gen = restrict_to_support(sup, full0);
  Vector x(gen.keep.size());
  for (std::size_t k = 0; k < gen.keep.size(); ++k) x(k) = full0(gen.keep[k]);

  Integrator rk(gen);
  Matrix previous;
  PeriodicInfo local_info;
  double t = 0.0;
  for (std::int64_t p = 0; p < std::max<std::int64_t>(max_periods, 2); ++p) {
    // Trapezoidal average over one period; the time grid restarts each period
    // at an exact multiple of the period so phases stay aligned.
    Vector sum = 0.5 * x;
    const double t0 = static_cast<double>(p) * period;
    for (std::int64_t s = 0; s < per_period; ++s) {
      rk.step(t0 + static_cast<double>(s) * dt, dt, x);
      sum += (s + 1 == per_period ? 0.5 : 1.0) * x;
    }
    t = t0 + period;
    Matrix avg = scatter(sum / static_cast<double>(per_period), gen.keep, d);
    avg = 0.5 * (avg + avg.adjoint());
    local_info.periods = static_cast<int>(p + 1);
    local_info.simulated_time = t;
    if (previous.size() != 0) {
      local_info.last_delta = trace_distance(avg, previous);
      if (local_info.last_delta < options.tolerance) {
        if (info) *info = local_info;
        DensityMatrix::Tolerance tol;
        tol.trace = kTraceDriftLimit;
        tol.min_eigenvalue = kRk4Positivity;
        return DensityMatrix(OperatorMatrix(model.layout(), std::move(avg)), tol);
      }
    }
    previous = std::move(avg);
    if (t >= options.time_cap) break;
  }
  if (info) *info = local_info;
  fail(ErrorCode::kNotConverged, "periodic steady state not converged after " + std::to_string(t * 1e6) +
                                     " us (last delta " + std::to_string(local_info.last_delta) + ")");
}

}  // namespace qres
