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

#include "qres/shadows.hpp"

#include <algorithm>
#include <cmath>

#include "qres/error.hpp"

namespace qres {

namespace {

constexpr int kMaxQubits = 4;
constexpr std::uint64_t kSettingDomain = 1;
constexpr std::uint64_t kBootstrapDomain = 2;

struct Factors {
  // factor[q][gate][bit]
  std::vector<std::array<std::array<Eigen::Matrix2cd, 2>, 3>> f;
};

Factors make_factors(int n, const CalibrationResult* calibration) {
  if (calibration && static_cast<int>(calibration->alpha.size()) != n)
    fail(ErrorCode::kDimensionMismatch, "calibration qubit count differs from dataset");
  Factors out;
  out.f.resize(n);
  for (int q = 0; q < n; ++q) {
    const double alpha = calibration ? calibration->alpha[q] : 3.0;
    const double beta = calibration ? calibration->beta[q] : 1.0;
    for (int g = 0; g < 3; ++g)
      for (int b = 0; b < 2; ++b) out.f[q][g][b] = snapshot_factor(static_cast<Gate>(g), b, alpha, beta);
  }
  return out;
}

int class_count(int n) { return setting_count(n) << n; }

int class_of(const ShotRecord& r, int n) { return (r.setting_id << n) + outcome_index(r.bits); }

// Gate and bit of qubit q within class c.
std::pair<int, int> class_local(int c, int q, int n) {
  const int outcome = c & ((1 << n) - 1);
  const CliffordSetting s = setting_from_id(c >> n, n);
  return {static_cast<int>(s[q]), (outcome >> (n - 1 - q)) & 1};
}

std::vector<int> record_classes(const ShadowDataset& data) {
  std::vector<int> cls;
  cls.reserve(data.records.size());
  for (const auto& r : data.records) cls.push_back(class_of(r, data.n_qubits));
  return cls;
}

std::vector<double> observable_table(int n, const Matrix& o, const Factors& fac) {
  std::vector<double> table(class_count(n));
  for (int c = 0; c < class_count(n); ++c) {
    Matrix s = Matrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
      auto [g, b] = class_local(c, q, n);
      s = kron(s, Matrix(fac.f[q][g][b]));
    }
    table[c] = (o * s).trace().real();
  }
  return table;
}

Eigen::MatrixXd pair_table(int n, const Factors& fac) {
  // Tr(rho_c rho_c') factorizes over qubits.
  std::vector<Eigen::Matrix<double, 6, 6>> local(n);
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        local[q](a, b) = (fac.f[q][a / 2][a % 2] * fac.f[q][b / 2][b % 2]).trace().real();
  const int nc = class_count(n);
  Eigen::MatrixXd t(nc, nc);
  for (int c = 0; c < nc; ++c)
    for (int d = 0; d < nc; ++d) {
      double v = 1.0;
      for (int q = 0; q < n; ++q) {
        auto [gc, bc] = class_local(c, q, n);
        auto [gd, bd] = class_local(d, q, n);
        v *= local[q](2 * gc + bc, 2 * gd + bd);
      }
      t(c, d) = v;
    }
  return t;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int group_size(std::size_t n_records, int k) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "K must be >= 1");
  const int m = static_cast<int>(n_records / k);
  if (m < 1) fail(ErrorCode::kInvalidArgument, "fewer records than groups");
  return m;
}

double purity_median(const std::vector<int>& classes, const std::vector<int>& indices, const Eigen::MatrixXd& pairs,
                     int k, int* truncated) {
  const int m = group_size(indices.size(), k);
  if (m < 2) fail(ErrorCode::kInvalidArgument, "purity needs at least two records per group");
  if (truncated) *truncated = static_cast<int>(indices.size()) - k * m;
  std::vector<double> groups(k);
  Eigen::VectorXd counts(pairs.rows());
  for (int g = 0; g < k; ++g) {
    counts.setZero();
    for (int i = g * m; i < (g + 1) * m; ++i) counts(classes[indices[i]]) += 1.0;
    const double all_pairs = counts.dot(pairs * counts);
    const double self = (counts.array() * pairs.diagonal().array()).sum();
    groups[g] = (all_pairs - self) / (static_cast<double>(m) * (m - 1));
  }
  return median(groups);
}

std::vector<int> iota_indices(std::size_t n) {
  std::vector<int> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
  return idx;
}

}  // namespace

CalibrationResult CalibrationResult::ideal(int n_qubits) {
  return from_marginals(std::vector<double>(n_qubits, 2.0 / 3.0));
}

CalibrationResult CalibrationResult::from_marginals(std::vector<double> c) {
  CalibrationResult r;
  r.c = std::move(c);
  for (double cn : r.c) {
    const double g = 3.0 * cn - 1.0;
    if (!(g > 0.5))
      fail(ErrorCode::kNoiseTooStrong, "calibration G = " + std::to_string(g) + " <= 1/2, noise too strong to invert");
    r.g.push_back(g);
    r.alpha.push_back(3.0 / (2.0 * g - 1.0));
    r.beta.push_back((2.0 - g) / (2.0 * g - 1.0));
  }
  return r;
}

void ShadowDataset::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits) fail(ErrorCode::kInvalidArgument, "shadow datasets support 1 to 4 qubits");
  if (records.empty()) fail(ErrorCode::kInvalidArgument, "empty shadow dataset");
  if (static_cast<long long>(records.size()) != static_cast<long long>(n_u) * n_m)
    fail(ErrorCode::kInvalidArgument, "record count differs from N_U * N_M");
  if (runs < 1 || records.size() % runs != 0)
    fail(ErrorCode::kInvalidArgument, "runs must divide the record count");
  for (const auto& r : records) {
    if (static_cast<int>(r.bits.size()) != n_qubits) fail(ErrorCode::kDimensionMismatch, "record bit count differs");
    if (r.setting_id < 0 || r.setting_id >= setting_count(n_qubits))
      fail(ErrorCode::kInvalidArgument, "record setting id out of range");
  }
}

const char* method_name(ShadowMethod m) { return m == ShadowMethod::kRobust ? "robust" : "standard"; }

std::vector<CliffordSetting> draw_settings(int n_qubits, int n_u, std::uint64_t seed) {
  if (n_u < 1) fail(ErrorCode::kInvalidArgument, "N_U must be >= 1");
  std::vector<CliffordSetting> out;
  out.reserve(n_u);
  for (int i = 0; i < n_u; ++i) {
    ShotStream rng(seed, static_cast<std::uint64_t>(i), kSettingDomain);
    CliffordSetting s(n_qubits);
    for (auto& g : s) g = static_cast<Gate>(rng.next() % 3);
    out.push_back(std::move(s));
  }
  return out;
}

ShadowDataset generate_shadow_dataset(const Matrix& rho, int n_u, int n_m, const RotationErrorModel& noise,
                                      const AssignmentMatrix& a, std::uint64_t seed, int runs) {
  if (n_m < 1) fail(ErrorCode::kInvalidArgument, "N_M must be >= 1");
  ShadowDataset d;
  d.n_qubits = a.n_qubits();
  d.n_u = n_u;
  d.n_m = n_m;
  d.seed = seed;
  d.runs = runs;
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(n_u) * n_m);
  for (const auto& s : draw_settings(d.n_qubits, n_u, seed))
    for (int j = 0; j < n_m; ++j) ids.push_back(setting_id(s));
  d.records = sample_shots(rho, ids, noise, a, seed);
  d.validate();
  return d;
}

Eigen::Matrix2cd snapshot_factor(Gate g, int bit, double alpha, double beta) {
  const Eigen::Matrix2cd u = gate_unitary(g);
  Eigen::Vector2cd ket = Eigen::Vector2cd::Zero();
  ket(bit ? 1 : 0) = 1.0;
  const Eigen::Vector2cd v = u.adjoint() * ket;
  return alpha * (v * v.adjoint()) - beta * Eigen::Matrix2cd::Identity();
}

OperatorMatrix snapshot(const CliffordSetting& setting, const std::vector<std::uint8_t>& bits,
                        const CalibrationResult* calibration) {
  const int n = static_cast<int>(setting.size());
  if (static_cast<int>(bits.size()) != n) fail(ErrorCode::kDimensionMismatch, "bits and setting lengths differ");
  const Factors fac = make_factors(n, calibration);
  Matrix s = Matrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) s = kron(s, Matrix(fac.f[q][static_cast<int>(setting[q])][bits[q] ? 1 : 0]));
  return OperatorMatrix(SpaceLayout::qubits(n), s);
}

CalibrationResult calibrate(const ShadowDataset& ground_dataset) {
  ground_dataset.validate();
  const int n = ground_dataset.n_qubits;
  std::vector<double> c(n, 0.0);
  for (const auto& r : ground_dataset.records) {
    const CliffordSetting s = setting_from_id(r.setting_id, n);
    for (int q = 0; q < n; ++q) {
      // |<b|U|g>|^2 with the ideal pulse: 1/2 for X90, Y90; delta_{b,g} for Id.
      const Eigen::Matrix2cd u = gate_unitary(s[q]);
      c[q] += std::norm(u(r.bits[q] ? 1 : 0, 0));
    }
  }
  for (double& v : c) v /= static_cast<double>(ground_dataset.records.size());
  return CalibrationResult::from_marginals(std::move(c));
}

Matrix mean_snapshot(const ShadowDataset& data, const CalibrationResult* calibration) {
  data.validate();
  const int n = data.n_qubits;
  const Factors fac = make_factors(n, calibration);
  std::vector<double> counts(class_count(n), 0.0);
  for (int c : record_classes(data)) counts[c] += 1.0;
  Matrix sum = Matrix::Zero(1 << n, 1 << n);
  for (int c = 0; c < class_count(n); ++c) {
    if (counts[c] == 0.0) continue;
    Matrix s = Matrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
      auto [g, b] = class_local(c, q, n);
      s = kron(s, Matrix(fac.f[q][g][b]));
    }
    sum += counts[c] * s;
  }
  return sum / static_cast<double>(data.records.size());
}

double median_of_means(const std::vector<double>& values, int k, int* truncated) {
  const int m = group_size(values.size(), k);
  if (truncated) *truncated = static_cast<int>(values.size()) - k * m;
  std::vector<double> means(k);
  for (int g = 0; g < k; ++g) {
    double s = 0.0;
    for (int i = g * m; i < (g + 1) * m; ++i) s += values[i];
    means[g] = s / m;
  }
  return median(means);
}

namespace {

// Calibrations from ground-state records resampled with replacement.
std::vector<CalibrationResult> calibration_replicates(const ShadowDataset& ground, int n_boot, std::uint64_t seed) {
  ground.validate();
  const int n = ground.n_qubits;
  const std::size_t size = ground.records.size();
  std::vector<std::vector<double>> contrib(size, std::vector<double>(n));
  for (std::size_t i = 0; i < size; ++i) {
    const CliffordSetting s = setting_from_id(ground.records[i].setting_id, n);
    for (int q = 0; q < n; ++q) contrib[i][q] = std::norm(gate_unitary(s[q])(ground.records[i].bits[q] ? 1 : 0, 0));
  }
  std::vector<CalibrationResult> out;
  out.reserve(n_boot);
  for (int b = 0; b < n_boot; ++b) {
    ShotStream rng(seed, static_cast<std::uint64_t>(b), kBootstrapDomain);
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
      const auto& row = contrib[rng.next() % size];
      for (int q = 0; q < n; ++q) c[q] += row[q];
    }
    for (double& v : c) v /= static_cast<double>(size);
    out.push_back(CalibrationResult::from_marginals(std::move(c)));
  }
  return out;
}

double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return var / static_cast<double>(v.size() - 1);
}

// Variance of the full-data estimate over recalibrations; zero without calibration data.
double calibration_variance(const ShadowDataset& data, const EstimatorOptions& options,
                            const CalibrationResult* calibration,
                            const std::function<double(const Factors&)>& full_estimate) {
  if (!calibration || !options.calibration_data) return 0.0;
  if (options.calibration_data->n_qubits != data.n_qubits)
    fail(ErrorCode::kDimensionMismatch, "calibration data qubit count differs from dataset");
  // Stream offset keeps these draws apart from the per-run data resamples.
  const std::uint64_t seed = options.bootstrap_seed ^ 0x9e3779b97f4a7c15ULL;
  std::vector<double> est;
  for (const auto& cal : calibration_replicates(*options.calibration_data, options.n_boot, seed))
    est.push_back(full_estimate(make_factors(data.n_qubits, &cal)));
  return sample_variance(est);
}

}  // namespace

double bootstrap_error(const ShadowDataset& data, const RecordEstimator& estimator, int n_boot, std::uint64_t seed) {
  if (n_boot < 2) fail(ErrorCode::kInvalidArgument, "n_boot must be >= 2");
  data.validate();
  const std::size_t run_size = data.records.size() / data.runs;
  double var_sum = 0.0;
  for (int run = 0; run < data.runs; ++run) {
    std::vector<double> est(n_boot);
    std::vector<int> idx(run_size);
    for (int b = 0; b < n_boot; ++b) {
      ShotStream rng(seed, static_cast<std::uint64_t>(run) * static_cast<std::uint64_t>(n_boot) + b, kBootstrapDomain);
      for (auto& i : idx) i = static_cast<int>(run * run_size + rng.next() % run_size);
      est[b] = estimator(idx);
    }
    var_sum += sample_variance(est);
  }
  if (data.runs == 1) return std::sqrt(var_sum);
  return std::sqrt(var_sum) / data.runs;
}

Estimate estimate_observable(const ShadowDataset& data, const Matrix& observable, const EstimatorOptions& options,
                             const CalibrationResult* calibration) {
  data.validate();
  const int n = data.n_qubits;
  if (observable.rows() != (1 << n) || observable.cols() != (1 << n))
    fail(ErrorCode::kDimensionMismatch, "observable dimension differs from dataset");
  const auto table = observable_table(n, observable, make_factors(n, calibration));
  const auto classes = record_classes(data);
  std::vector<double> values(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) values[i] = table[classes[i]];

  Estimate e;
  e.k = options.k;
  e.method = calibration ? ShadowMethod::kRobust : ShadowMethod::kStandard;
  e.value = median_of_means(values, options.k, &e.truncated);
  const int run_k = std::min<int>(options.k, static_cast<int>(values.size() / data.runs));
  auto est = [&](const std::vector<int>& idx) {
    std::vector<double> v(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) v[i] = values[idx[i]];
    return median_of_means(v, run_k);
  };
  const double se = bootstrap_error(data, est, options.n_boot, options.bootstrap_seed);
  const double cal_var = calibration_variance(data, options, calibration, [&](const Factors& f) {
    const auto t = observable_table(n, observable, f);
    std::vector<double> v(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) v[i] = t[classes[i]];
    return median_of_means(v, options.k);
  });
  e.std_error = std::sqrt(se * se + cal_var);
  return e;
}

Estimate estimate_purity(const ShadowDataset& data, const EstimatorOptions& options,
                         const CalibrationResult* calibration) {
  data.validate();
  const auto pairs = pair_table(data.n_qubits, make_factors(data.n_qubits, calibration));
  const auto classes = record_classes(data);
  Estimate e;
  e.k = options.k;
  e.method = calibration ? ShadowMethod::kRobust : ShadowMethod::kStandard;
  e.value = purity_median(classes, iota_indices(classes.size()), pairs, options.k, &e.truncated);
  const int run_k = std::min<int>(options.k, static_cast<int>(classes.size() / data.runs / 2));
  auto est = [&](const std::vector<int>& idx) { return purity_median(classes, idx, pairs, run_k, nullptr); };
  const double se = bootstrap_error(data, est, options.n_boot, options.bootstrap_seed);
  const auto all = iota_indices(classes.size());
  const double cal_var = calibration_variance(data, options, calibration, [&](const Factors& f) {
    return purity_median(classes, all, pair_table(data.n_qubits, f), options.k, nullptr);
  });
  e.std_error = std::sqrt(se * se + cal_var);
  return e;
}

}  // namespace qres
