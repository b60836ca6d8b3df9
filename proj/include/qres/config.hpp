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

// Scenario and sweep configuration. TOML in, with frequencies in MHz
// (converted to 2 pi x rad/s), rates in kHz, times in us or ns as the key
// suffix says.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "qres/measurement_sim.hpp"
#include "qres/reservoir_model.hpp"

namespace qres {

struct ModelConfig {
  LatticeSpec lattice;
  std::vector<ReservoirSpec> reservoirs;
  std::optional<SharedModeSpec> shared;
  DeviceNoise noise;
  int cutoff = 3;
};

struct ScheduleConfig {
  std::vector<std::string> initial{"gg"};  // labels over {gg, ge, eg, ee}
  std::optional<Matrix> initial_matrix;    // explicit two-qubit state; overrides labels
  double prep_error = 0.008;               // eta, applied to the gg label
  double duration = 0.0;                   // s
  int record_stride = 20;
  double dt_max = 0.5e-9;                  // s
  std::string mode = "evolve";             // evolve | steady
  std::string target = "minus";            // minus | plus
  double phase = 0.0;                      // eigenbasis phase for reported populations
  bool check_dt = true;
  bool check_cutoff = true;
};

struct EstimationConfig {
  std::string method = "exact";  // exact | qst | shadow_standard | shadow_robust
  int shots = 90000;             // per dataset
  int runs = 9;
  int k = 100;
  int n_boot = 400;
  int n_m = 1;
  int calibration_shots = 90000;
  std::string noise_preset = "ideal";  // ideal | default
  double flip = 0.0;
  RotationErrorModel rotation;
  double inject_phase = 0.0;  // rad, dynamical phase applied before readout
};

struct ScenarioConfig {
  std::string name;
  ModelConfig model;
  ScheduleConfig schedule;
  EstimationConfig estimation;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  nlohmann::json resolved;  // merged configuration after presets, as JSON
};

using AxisValue = std::variant<double, std::string>;

struct SweepAxis {
  std::string path;  // e.g. model.reservoirs[0].detuning_mhz
  std::vector<AxisValue> values;
};

struct SweepConfig {
  ScenarioConfig base;
  std::vector<SweepAxis> axes;
  int max_points = 2000;
  std::string evaluate = "steady";  // steady | evolve
  nlohmann::json base_tree;         // merged configuration the axes are applied to
};

/// Parses TOML text; `origin` names the source in error messages.
ScenarioConfig parse_scenario(const std::string& toml_text, const std::string& origin = "<string>");
ScenarioConfig load_scenario(const std::string& path);

SweepConfig parse_sweep(const std::string& toml_text, const std::string& origin = "<string>");
SweepConfig load_sweep(const std::string& path);

/// Scenario built from an already merged configuration tree.
ScenarioConfig scenario_from_tree(const nlohmann::json& tree);

/// Sets a value at a dotted path with optional [i] indices.
void set_path(nlohmann::json& tree, const std::string& path, const AxisValue& value);

/// Named parameter sets ("appC", "appC_073") as configuration trees.
nlohmann::json preset_tree(const std::string& name);

LiouvillianModel build_scenario_model(const ModelConfig& model);

/// Two-qubit state for a label, tensored with resonator vacua of `layout`.
DensityMatrix initial_state(const std::string& label, double prep_error, const SpaceLayout& layout);
DensityMatrix initial_state(const Matrix& qubit_rho, const SpaceLayout& layout);

/// Rotation/readout imperfections selected by the estimation block.
RotationErrorModel rotation_model(const EstimationConfig& e);
AssignmentMatrix assignment_model(const EstimationConfig& e, int n_qubits);

}  // namespace qres
