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

// Config-driven runners: scenarios, sweeps, ablations and the measurement
// chain (shadows, tomography, shadow calibration).

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qres/config.hpp"
#include "qres/lindblad.hpp"
#include "qres/observables.hpp"

namespace qres {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::optional<std::string> output_dir;  // overrides run.output
  std::optional<std::uint64_t> seed;      // overrides run.seed
  int threads = 1;
  bool write_files = true;
  int shard_index = 0;  // sweeps only
  int shard_count = 1;
};

struct Observables {
  double fidelity = 0.0;  // to the scenario target at the configured phase
  PopulationSet populations;
  double purity = 0.0;
  double xx = 0.0, yy = 0.0, zz = 0.0;
};

Observables measure(const DensityMatrix& rho, const std::string& target, double phase);

struct GateOutcome {
  std::string name;
  std::string status;  // pass | fail | skipped
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct TraceRun {
  std::string initial;
  std::vector<double> times;  // s
  std::vector<Observables> series;
  DensityMatrix final_state;  // qubit register
  double max_trace_drift = 0.0;
};

struct ScenarioResult {
  std::vector<TraceRun> runs;
  std::optional<DensityMatrix> asymptotic;  // qubit register
  std::optional<Observables> asymptotic_observables;
  std::vector<GateOutcome> gates;
  nlohmann::json estimation;  // null for the exact method
  nlohmann::json manifest;
};

/// Steady state for static models, period-averaged state otherwise. Falls
/// back to evolving `fallback_initial` for `duration` when the kernel is
/// degenerate; `note` receives which solver produced the state.
DensityMatrix asymptotic_state(const LiouvillianModel& model, const DensityMatrix& fallback_initial, double duration,
                               std::string* note = nullptr);

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

struct SweepRow {
  int index = 0;
  std::vector<std::string> axis_values;  // as written in the CSV
  Observables obs;
  std::string status;  // ok | error
  std::string message;
};

/// Evaluates every grid point not yet marked complete under <out>/points, then
/// merges all completed points into <out>/sweep.csv once the grid is full.
std::vector<SweepRow> run_sweep(const SweepConfig& config, const RunOptions& options = {});

inline const std::vector<std::string> kAblationToggles{"zero_resonator_thermal", "zero_intrinsic_decay",
                                                       "infinite_selectivity"};

/// Steady-state fidelity change per toggle and for all given toggles together.
nlohmann::json run_ablation(const ScenarioConfig& config, const std::vector<std::string>& toggles,
                            const RunOptions& options = {});

/// Applies an ablation toggle to a model configuration.
ModelConfig apply_toggle(ModelConfig model, const std::string& toggle);

/// Classical-shadow estimation of the scenario state (method shadow_standard
/// or shadow_robust; other methods default to robust).
nlohmann::json run_shadows(const ScenarioConfig& config, const RunOptions& options = {});

/// Pauli tomography over estimation.runs datasets.
nlohmann::json run_tomography(const ScenarioConfig& config, const RunOptions& options = {});

/// Robust-shadow calibration from the ground state under the configured noise.
nlohmann::json run_calibration(const ScenarioConfig& config, const RunOptions& options = {});

/// Deterministic child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k);

}  // namespace qres
