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

// Physical models for a hard-core qubit lattice with sideband-engineered
// local reservoirs. All frequencies and rates are in rad/s (see units.hpp).

#include <string>
#include <vector>

#include "qres/model.hpp"
#include "qres/qlinalg.hpp"

namespace qres {

struct LatticeSpec {
  int n_sites = 2;
  double hopping = 0.0;               // J
  std::vector<double> site_energies;  // rotating-frame offsets; empty means all zero
  double interaction = 0.0;           // U, recorded only: two-level truncation is hard-core
  int qubit_levels = 2;

  void validate() const;
  double site_energy(int i) const { return site_energies.empty() ? 0.0 : site_energies.at(i); }
};

/// Flux-modulation parameters of one transmon coupled to its readout resonator.
struct ModulationSpec {
  double bare_coupling = 0.0;  // g
  double amplitude = 0.0;      // A_mod
  double frequency = 0.0;      // w_mod
  double qubit_frequency = 0.0;
  double resonator_frequency = 0.0;

  /// Throws on non-positive frequencies; returns warnings (dispersive ratio < 10).
  std::vector<std::string> validate() const;
};

enum class ReservoirKind { kPump, kLoss };

const char* reservoir_kind_name(ReservoirKind kind);

struct ReservoirSpec {
  ReservoirKind kind = ReservoirKind::kLoss;
  std::string site;          // qubit label, e.g. "Q1"
  double coupling = 0.0;     // g_S or g_D
  double detuning = 0.0;     // delta_S or delta_D
  double linewidth = 0.0;    // kappa
  double thermal_occupation = 0.0;

  /// Throws on invalid values; returns the weak-coupling warning if g >= kappa.
  std::vector<std::string> validate() const;
};

struct DeviceNoise {
  double gamma1 = 0.0;
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double thermal_occupation = 0.0;  // qubit n_th
  double gamma_phi = 0.0;

  void validate() const;
};

/// Pump and loss sidebands driven on the same qubit through one resonator.
struct SharedModeSpec {
  std::string site;
  double pump_coupling = 0.0;
  double loss_coupling = 0.0;
  double pump_detuning = 0.0;
  double loss_detuning = 0.0;
  double linewidth = 0.0;
  double thermal_occupation = 0.0;

  std::vector<std::string> validate() const;
  /// Residual oscillation of the blue sideband in the static red-sideband frame.
  double micromotion() const { return pump_detuning + loss_detuning; }
};

/// g * J1(A_mod / w_mod).
double sideband_coupling(const ModulationSpec& mod);

/// Lorentzian reservoir rate g^2 kappa / (delta^2 + (kappa/2)^2).
double lorentzian_rate(double coupling, double linewidth, double detuning);

/// Resonator label paired with a qubit label ("Q2" -> "R2").
std::string resonator_label(const std::string& qubit_label);

/// Nearest-neighbour hopping chain plus site energies on the qubits of `layout`.
OperatorMatrix build_lattice_hamiltonian(const LatticeSpec& spec, const SpaceLayout& layout);

/// Qubits Q1..Qn followed by one resonator per listed site.
SpaceLayout reservoir_layout(int n_sites, const std::vector<std::string>& resonator_sites, int resonator_cutoff);

/// Static model with one resonator per reservoir. `resonator_cutoff` is the
/// highest Fock level kept (dimension cutoff + 1).
LiouvillianModel build_model(const LatticeSpec& lattice, const std::vector<ReservoirSpec>& reservoirs,
                             const DeviceNoise& noise, int resonator_cutoff);

/// Pump and loss through a single resonator. Carries one oscillating term at
/// the micromotion frequency unless it vanishes.
LiouvillianModel build_shared_mode_model(const LatticeSpec& lattice, const SharedModeSpec& shared,
                                         const DeviceNoise& noise, int resonator_cutoff);

/// Single-excitation Bell states (|ge> +/- |eg>)/sqrt(2) on two qubits.
Vector bell_plus();
Vector bell_minus();

}  // namespace qres
