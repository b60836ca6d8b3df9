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

#include "qres/reservoir_model.hpp"

#include <cmath>
#include <set>

#include "qres/error.hpp"

namespace qres {

void LatticeSpec::validate() const {
  if (n_sites < 1) fail(ErrorCode::kInvalidArgument, "lattice needs at least one site");
  if (!site_energies.empty() && static_cast<int>(site_energies.size()) != n_sites)
    fail(ErrorCode::kInvalidArgument, "site_energies length must equal n_sites");
  if (qubit_levels != 2)
    fail(ErrorCode::kInvalidArgument, "only two-level qubits are supported (hard-core limit)");
}

std::vector<std::string> ModulationSpec::validate() const {
  if (frequency <= 0.0 || qubit_frequency <= 0.0 || resonator_frequency <= 0.0)
    fail(ErrorCode::kInvalidArgument, "modulation frequencies must be positive");
  std::vector<std::string> warnings;
  const double detuning = resonator_frequency - qubit_frequency;
  if (bare_coupling > 0.0 && std::abs(detuning) / bare_coupling < 10.0)
    warnings.push_back("dispersive ratio |w_r - w_q| / g below 10");
  return warnings;
}

const char* reservoir_kind_name(ReservoirKind kind) {
  return kind == ReservoirKind::kPump ? "pump" : "loss";
}

std::vector<std::string> ReservoirSpec::validate() const {
  if (coupling < 0.0) fail(ErrorCode::kInvalidArgument, "reservoir coupling must be >= 0");
  if (linewidth <= 0.0) fail(ErrorCode::kInvalidArgument, "reservoir linewidth must be > 0");
  if (thermal_occupation < 0.0 || thermal_occupation >= 1.0)
    fail(ErrorCode::kInvalidArgument, "resonator thermal occupation must lie in [0, 1)");
  std::vector<std::string> warnings;
  if (coupling >= linewidth)
    warnings.push_back(std::string(reservoir_kind_name(kind)) + " reservoir on " + site +
                       " outside weak coupling (g >= kappa)");
  return warnings;
}

void DeviceNoise::validate() const {
  if (gamma1 < 0.0 || gamma_plus < 0.0 || gamma_minus < 0.0 || thermal_occupation < 0.0 || gamma_phi < 0.0)
    fail(ErrorCode::kInvalidArgument, "noise rates and occupations must be >= 0");
}

std::vector<std::string> SharedModeSpec::validate() const {
  std::vector<std::string> warnings;
  for (auto kind : {ReservoirKind::kPump, ReservoirKind::kLoss}) {
    ReservoirSpec r{kind, site, kind == ReservoirKind::kPump ? pump_coupling : loss_coupling,
                    kind == ReservoirKind::kPump ? pump_detuning : loss_detuning, linewidth, thermal_occupation};
    auto w = r.validate();
    warnings.insert(warnings.end(), w.begin(), w.end());
  }
  return warnings;
}

double sideband_coupling(const ModulationSpec& mod) {
  if (mod.frequency <= 0.0) fail(ErrorCode::kInvalidArgument, "modulation frequency must be > 0");
  return mod.bare_coupling * std::cyl_bessel_j(1.0, mod.amplitude / mod.frequency);
}

double lorentzian_rate(double coupling, double linewidth, double detuning) {
  if (linewidth <= 0.0) fail(ErrorCode::kInvalidArgument, "linewidth must be > 0");
  const double half = 0.5 * linewidth;
  return coupling * coupling * linewidth / (detuning * detuning + half * half);
}

std::string resonator_label(const std::string& qubit_label) {
  if (qubit_label.size() < 2 || qubit_label[0] != 'Q')
    fail(ErrorCode::kInvalidArgument, "reservoir site must be a qubit label like 'Q1', got '" + qubit_label + "'");
  return "R" + qubit_label.substr(1);
}

OperatorMatrix build_lattice_hamiltonian(const LatticeSpec& spec, const SpaceLayout& layout) {
  spec.validate();
  int qubits = 0;
  for (int s = 0; s < layout.size(); ++s)
    if (!layout.labels()[s].empty() && layout.labels()[s][0] == 'Q') ++qubits;
  if (qubits != spec.n_sites)
    fail(ErrorCode::kDimensionMismatch, "layout holds " + std::to_string(qubits) + " qubits, lattice has " +
                                            std::to_string(spec.n_sites) + " sites");
  std::vector<OperatorMatrix> a;
  for (int i = 1; i <= spec.n_sites; ++i) {
    const std::string label = "Q" + std::to_string(i);
    if (layout.dim_of(label) != 2) fail(ErrorCode::kDimensionMismatch, label + " is not a two-level subsystem");
    a.push_back(embed(annihilation(2), label, layout));
  }
  OperatorMatrix h = OperatorMatrix::zero(layout);
  for (int i = 0; i + 1 < spec.n_sites; ++i) {
    const OperatorMatrix hop = a[i].adjoint() * a[i + 1];
    h += spec.hopping * (hop + hop.adjoint());
  }
  for (int i = 0; i < spec.n_sites; ++i) {
    const double eps = spec.site_energy(i);
    if (eps != 0.0) h += eps * (a[i].adjoint() * a[i]);
  }
  return h;
}

SpaceLayout reservoir_layout(int n_sites, const std::vector<std::string>& resonator_sites, int resonator_cutoff) {
  if (resonator_cutoff < 2) fail(ErrorCode::kInvalidArgument, "resonator cutoff must be >= 2");
  std::vector<int> dims(n_sites, 2);
  std::vector<std::string> labels;
  for (int i = 1; i <= n_sites; ++i) labels.push_back("Q" + std::to_string(i));
  for (const auto& site : resonator_sites) {
    dims.push_back(resonator_cutoff + 1);
    labels.push_back(resonator_label(site));
  }
  return {std::move(dims), std::move(labels)};
}

namespace {

void add_resonator_jumps(LiouvillianModel& model, const std::string& res, double kappa, double n_th) {
  const OperatorMatrix b = embed(annihilation(model.layout().dim_of(res)), res, model.layout());
  model.add_jump(res + ":decay", std::sqrt(kappa * (1.0 + n_th)) * b);
  if (n_th > 0.0) model.add_jump(res + ":thermal", std::sqrt(kappa * n_th) * b.adjoint());
}

void add_qubit_noise(LiouvillianModel& model, int n_sites, const DeviceNoise& noise) {
  noise.validate();
  const SpaceLayout& layout = model.layout();
  const double n_th = noise.thermal_occupation;
  for (int i = 1; i <= n_sites; ++i) {
    const std::string q = "Q" + std::to_string(i);
    const OperatorMatrix a = embed(annihilation(2), q, layout);
    if (noise.gamma1 > 0.0) {
      model.add_jump(q + ":decay", std::sqrt(noise.gamma1 * (1.0 + n_th)) * a);
      if (n_th > 0.0) model.add_jump(q + ":thermal", std::sqrt(noise.gamma1 * n_th) * a.adjoint());
    }
  }
  if (noise.gamma_plus > 0.0 || noise.gamma_minus > 0.0) {
    if (n_sites != 2) fail(ErrorCode::kInvalidArgument, "collective decay is defined for two qubits only");
    const int rest = layout.total_dim() / 4;
    Vector ground = Vector::Zero(4);
    ground(0) = 1.0;
    const std::pair<const char*, std::pair<double, Vector>> channels[] = {
        {"plus", {noise.gamma_plus, bell_plus()}}, {"minus", {noise.gamma_minus, bell_minus()}}};
    for (const auto& [name, rate_state] : channels) {
      const auto& [rate, bell] = rate_state;
      if (rate <= 0.0) continue;
      // Decay lowers |+/-> to |00>; the thermal partner raises it back.
      const Matrix lower = kron(ground * bell.adjoint(), identity(rest));
      model.add_jump(std::string(name) + ":decay", OperatorMatrix(layout, std::sqrt(rate * (1.0 + n_th)) * lower));
      if (n_th > 0.0)
        model.add_jump(std::string(name) + ":thermal",
                       OperatorMatrix(layout, std::sqrt(rate * n_th) * lower.adjoint()));
    }
  }
  if (noise.gamma_phi > 0.0) {
    for (int i = 1; i <= n_sites; ++i) {
      const std::string q = "Q" + std::to_string(i);
      model.add_jump(q + ":dephasing", std::sqrt(0.5 * noise.gamma_phi) * embed(pauli('Z'), q, layout));
    }
  }
}

}  // namespace

LiouvillianModel build_model(const LatticeSpec& lattice, const std::vector<ReservoirSpec>& reservoirs,
                             const DeviceNoise& noise, int resonator_cutoff) {
  lattice.validate();
  std::vector<std::string> sites;
  std::set<std::string> unique_sites;
  LiouvillianModel model;
  for (const auto& r : reservoirs) {
    auto w = r.validate();
    model.warnings.insert(model.warnings.end(), w.begin(), w.end());
    if (!unique_sites.insert(r.site).second)
      fail(ErrorCode::kInvalidArgument, "two reservoirs on site '" + r.site + "'; use the shared-mode model");
    sites.push_back(r.site);
  }
  const SpaceLayout layout = reservoir_layout(lattice.n_sites, sites, resonator_cutoff);
  for (const auto& r : reservoirs)
    if (!layout.contains(r.site)) fail(ErrorCode::kInvalidArgument, "unknown reservoir site '" + r.site + "'");

  OperatorMatrix h = build_lattice_hamiltonian(lattice, layout);
  for (const auto& r : reservoirs) {
    const std::string res = resonator_label(r.site);
    const OperatorMatrix a = embed(annihilation(2), r.site, layout);
    const OperatorMatrix b = embed(annihilation(resonator_cutoff + 1), res, layout);
    const OperatorMatrix nb = b.adjoint() * b;
    if (r.kind == ReservoirKind::kLoss) {
      // Red sideband: exchange a^dag b + a b^dag, resonator at +delta_D.
      const OperatorMatrix x = a.adjoint() * b;
      h += r.detuning * nb + r.coupling * (x + x.adjoint());
    } else {
      // Blue sideband: pair creation a^dag b^dag + a b, resonator at -delta_S.
      const OperatorMatrix x = a.adjoint() * b.adjoint();
      h += -r.detuning * nb + r.coupling * (x + x.adjoint());
    }
  }
  model.h_static = std::move(h);
  for (const auto& r : reservoirs)
    add_resonator_jumps(model, resonator_label(r.site), r.linewidth, r.thermal_occupation);
  add_qubit_noise(model, lattice.n_sites, noise);
  model.validate();
  return model;
}

LiouvillianModel build_shared_mode_model(const LatticeSpec& lattice, const SharedModeSpec& shared,
                                         const DeviceNoise& noise, int resonator_cutoff) {
  lattice.validate();
  LiouvillianModel model;
  model.warnings = shared.validate();
  const SpaceLayout layout = reservoir_layout(lattice.n_sites, {shared.site}, resonator_cutoff);
  if (!layout.contains(shared.site)) fail(ErrorCode::kInvalidArgument, "unknown reservoir site '" + shared.site + "'");
  const std::string res = resonator_label(shared.site);
  const OperatorMatrix a = embed(annihilation(2), shared.site, layout);
  const OperatorMatrix b = embed(annihilation(resonator_cutoff + 1), res, layout);
  const OperatorMatrix exchange = a.adjoint() * b;
  const OperatorMatrix pair = shared.pump_coupling * (a.adjoint() * b.adjoint());

  OperatorMatrix h = build_lattice_hamiltonian(lattice, layout);
  h += shared.loss_detuning * (b.adjoint() * b) + shared.loss_coupling * (exchange + exchange.adjoint());
  const double omega = shared.micromotion();
  if (omega == 0.0) {
    h += pair + pair.adjoint();
  } else if (shared.pump_coupling != 0.0) {
    model.oscillating.push_back({pair, omega});
  }
  model.h_static = std::move(h);
  add_resonator_jumps(model, res, shared.linewidth, shared.thermal_occupation);
  add_qubit_noise(model, lattice.n_sites, noise);
  model.validate();
  return model;
}

Vector bell_plus() {
  Vector v = Vector::Zero(4);
  v(1) = v(2) = 1.0 / std::sqrt(2.0);
  return v;
}

Vector bell_minus() {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace qres
