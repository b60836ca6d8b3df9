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

// Standard and robust classical shadows from random local {X90, Y90, Id}
// basis changes. Snapshots are kept as per-qubit 2x2 factors; records are
// grouped into (setting, outcome) classes so estimators never form 4^n
// matrices per shot.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qres/measurement_sim.hpp"
#include "qres/qlinalg.hpp"

namespace qres {

struct CalibrationResult {
  std::vector<double> c, g, alpha, beta;  // per qubit

  /// alpha = 3, beta = 1 on every qubit (G = 1).
  static CalibrationResult ideal(int n_qubits);
  /// Derives G, alpha, beta from C; throws kNoiseTooStrong when G <= 1/2.
  static CalibrationResult from_marginals(std::vector<double> c);
};

struct ShadowDataset {
  int n_qubits = 2;
  std::vector<ShotRecord> records;
  int n_u = 0;  // distinct random settings
  int n_m = 0;  // shots per setting
  std::uint64_t seed = 0;
  int runs = 1;  // contiguous, equally sized independent runs
  std::optional<CalibrationResult> calibration;

  void validate() const;
};

enum class ShadowMethod { kStandard, kRobust };

const char* method_name(ShadowMethod m);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  int k = 1;
  ShadowMethod method = ShadowMethod::kStandard;
  int truncated = 0;  // records dropped so that K divides the record count
};

struct EstimatorOptions {
  int k = 100;
  int n_boot = 400;
  std::uint64_t bootstrap_seed = 0;
  /// Ground-state records behind the calibration. When set, the stderr of a
  /// robust estimate also carries the spread from resampling these records.
  const ShadowDataset* calibration_data = nullptr;
};

/// i.i.d. uniform settings over the 3^n choices.
std::vector<CliffordSetting> draw_settings(int n_qubits, int n_u, std::uint64_t seed);

/// N_U random settings, each measured N_M times.
ShadowDataset generate_shadow_dataset(const Matrix& rho, int n_u, int n_m, const RotationErrorModel& noise,
                                      const AssignmentMatrix& a, std::uint64_t seed, int runs = 1);

/// alpha U^dagger |b><b| U - beta I for one qubit.
Eigen::Matrix2cd snapshot_factor(Gate g, int bit, double alpha, double beta);

/// Full snapshot; `calibration` null gives the standard estimator.
OperatorMatrix snapshot(const CliffordSetting& setting, const std::vector<std::uint8_t>& bits,
                        const CalibrationResult* calibration = nullptr);

/// C_n from a dataset prepared in |g...g>, then G_n = 3 C_n - 1.
CalibrationResult calibrate(const ShadowDataset& ground_dataset);

/// Plain mean of all snapshots (Hermitian, unit trace, not necessarily positive).
Matrix mean_snapshot(const ShadowDataset& data, const CalibrationResult* calibration = nullptr);

/// Median of K group means of Tr(O rho_i); stderr from bootstrap_error.
Estimate estimate_observable(const ShadowDataset& data, const Matrix& observable, const EstimatorOptions& options,
                             const CalibrationResult* calibration = nullptr);

/// Median over K groups of the pairwise U-statistic of Tr(rho_i rho_j).
Estimate estimate_purity(const ShadowDataset& data, const EstimatorOptions& options,
                         const CalibrationResult* calibration = nullptr);

/// Estimator evaluated on a list of record indices into the dataset.
using RecordEstimator = std::function<double(const std::vector<int>& record_indices)>;

/// Standard deviation over n_boot resamples with replacement. With runs > 1
/// each run is bootstrapped separately and the standard error of the mean
/// across runs is returned.
double bootstrap_error(const ShadowDataset& data, const RecordEstimator& estimator, int n_boot, std::uint64_t seed);

/// Median of group means for arbitrary per-record values (K groups by order).
double median_of_means(const std::vector<double>& values, int k, int* truncated = nullptr);

}  // namespace qres
