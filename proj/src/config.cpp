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

#include "qres/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qres/error.hpp"
#include "qres/units.hpp"
#include "toml.hpp"

namespace qres {

namespace {

using json = nlohmann::json;

const char* const kAppC = R"(
[model]
cutoff = 3

[model.lattice]
n_sites = 2
J_mhz = 6.0
U_mhz = 0.0

[model.noise]
gamma1_khz = 4.0
gamma_plus_khz = 8.4
gamma_minus_khz = 3.2
n_th = 0.05
gamma_phi_khz = 0.0

[[model.reservoirs]]
kind = "pump"
site = "Q1"
g_mhz = 0.75
detuning_mhz = -6.0
kappa_mhz = 1.5
n_th = 0.025

[[model.reservoirs]]
kind = "loss"
site = "Q2"
g_mhz = 0.58
detuning_mhz = 6.0
kappa_mhz = 1.5
n_th = 0.025
)";

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::kConfig, msg); }

json toml_to_json(const toml::node& node, const std::string& where) {
  if (auto t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v, where + "." + std::string(k.str()));
    return out;
  }
  if (auto a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v, where + "[]"));
    return out;
  }
  if (auto v = node.as_integer()) return v->get();
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_boolean()) return v->get();
  if (auto v = node.as_string()) return v->get();
  config_error("unsupported TOML value type at " + where);
}

json parse_toml_tree(const std::string& text, const std::string& origin) {
  try {
    toml::table t = toml::parse(text, origin);
    return toml_to_json(t, "");
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << origin << ": " << e.description() << " (line " << e.source().begin.line << ")";
    config_error(msg.str());
  }
}

void merge_into(json& base, const json& over) {
  for (auto it = over.begin(); it != over.end(); ++it) {
    if (it->is_object() && base.contains(it.key()) && base[it.key()].is_object())
      merge_into(base[it.key()], *it);
    else
      base[it.key()] = *it;
  }
}

json resolve_presets(json tree) {
  if (!tree.contains("model") || !tree["model"].is_object()) return tree;
  json& model = tree["model"];
  if (!model.contains("preset")) return tree;
  if (!model["preset"].is_string()) config_error("model.preset must be a string");
  json merged = preset_tree(model["preset"].get<std::string>());
  const bool user_shared = model.contains("shared_mode");
  if (user_shared) merged["model"].erase("reservoirs");  // the preset's baths give way to a shared mode
  merge_into(merged["model"], model);
  merged["model"].erase("preset");
  json out = tree;
  out["model"] = merged["model"];
  out["model"]["preset_applied"] = model["preset"];
  return out;
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) config_error(where + " must be a table");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) config_error("unknown key '" + it.key() + "' in " + where);
}

double number(const json& obj, const std::string& key, const std::string& where, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error("missing key '" + key + "' in " + where);
  }
  const json& v = obj.at(key);
  if (!v.is_number()) config_error(where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) config_error(where + "." + key + " must be finite");
  return d;
}

long long integer(const json& obj, const std::string& key, const std::string& where, std::optional<long long> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error("missing key '" + key + "' in " + where);
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) config_error(where + "." + key + " must be an integer");
  return v.get<long long>();
}

std::string text(const json& obj, const std::string& key, const std::string& where, std::optional<std::string> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error("missing key '" + key + "' in " + where);
  }
  if (!obj.at(key).is_string()) config_error(where + "." + key + " must be a string");
  return obj.at(key).get<std::string>();
}

bool boolean(const json& obj, const std::string& key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) config_error(where + "." + key + " must be true or false");
  return obj.at(key).get<bool>();
}

void one_of(const std::string& value, const std::set<std::string>& allowed, const std::string& where) {
  if (!allowed.count(value)) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    config_error(where + " must be one of {" + list + "}, got '" + value + "'");
  }
}

ModelConfig parse_model(const json& m) {
  check_keys(m, "model", {"preset_applied", "cutoff", "lattice", "reservoirs", "shared_mode", "noise"});
  ModelConfig out;
  out.cutoff = static_cast<int>(integer(m, "cutoff", "model", 3));
  if (out.cutoff < 2) config_error("model.cutoff must be >= 2");

  if (!m.contains("lattice")) config_error("missing table model.lattice");
  const json& l = m["lattice"];
  check_keys(l, "model.lattice", {"n_sites", "J_mhz", "site_energies_mhz", "U_mhz", "qubit_levels"});
  out.lattice.n_sites = static_cast<int>(integer(l, "n_sites", "model.lattice"));
  out.lattice.hopping = units::mhz(number(l, "J_mhz", "model.lattice"));
  out.lattice.interaction = units::mhz(number(l, "U_mhz", "model.lattice", 0.0));
  out.lattice.qubit_levels = static_cast<int>(integer(l, "qubit_levels", "model.lattice", 2));
  if (l.contains("site_energies_mhz")) {
    if (!l["site_energies_mhz"].is_array()) config_error("model.lattice.site_energies_mhz must be an array");
    for (const auto& e : l["site_energies_mhz"]) {
      if (!e.is_number()) config_error("model.lattice.site_energies_mhz entries must be numbers");
      out.lattice.site_energies.push_back(units::mhz(e.get<double>()));
    }
  }
  try {
    out.lattice.validate();
  } catch (const Error& e) {
    config_error(std::string("model.lattice: ") + e.what());
  }

  const json noise = m.value("noise", json::object());
  check_keys(noise, "model.noise", {"gamma1_khz", "gamma_plus_khz", "gamma_minus_khz", "n_th", "gamma_phi_khz"});
  out.noise.gamma1 = units::khz(number(noise, "gamma1_khz", "model.noise", 0.0));
  out.noise.gamma_plus = units::khz(number(noise, "gamma_plus_khz", "model.noise", 0.0));
  out.noise.gamma_minus = units::khz(number(noise, "gamma_minus_khz", "model.noise", 0.0));
  out.noise.thermal_occupation = number(noise, "n_th", "model.noise", 0.0);
  out.noise.gamma_phi = units::khz(number(noise, "gamma_phi_khz", "model.noise", 0.0));

  const bool has_res = m.contains("reservoirs") && !m["reservoirs"].empty();
  const bool has_shared = m.contains("shared_mode");
  if (has_res == has_shared) config_error("model needs exactly one of 'reservoirs' or 'shared_mode'");
  if (has_res) {
    if (!m["reservoirs"].is_array()) config_error("model.reservoirs must be an array of tables");
    int i = 0;
    for (const auto& r : m["reservoirs"]) {
      const std::string where = "model.reservoirs[" + std::to_string(i++) + "]";
      check_keys(r, where, {"kind", "site", "g_mhz", "detuning_mhz", "kappa_mhz", "n_th"});
      ReservoirSpec spec;
      const std::string kind = text(r, "kind", where);
      one_of(kind, {"pump", "loss"}, where + ".kind");
      spec.kind = kind == "pump" ? ReservoirKind::kPump : ReservoirKind::kLoss;
      spec.site = text(r, "site", where);
      spec.coupling = units::mhz(number(r, "g_mhz", where));
      spec.detuning = units::mhz(number(r, "detuning_mhz", where));
      spec.linewidth = units::mhz(number(r, "kappa_mhz", where));
      spec.thermal_occupation = number(r, "n_th", where, 0.0);
      out.reservoirs.push_back(spec);
    }
  } else {
    const json& s = m["shared_mode"];
    const std::string where = "model.shared_mode";
    check_keys(s, where, {"site", "g_pump_mhz", "g_loss_mhz", "detuning_pump_mhz", "detuning_loss_mhz", "kappa_mhz", "n_th"});
    SharedModeSpec spec;
    spec.site = text(s, "site", where, std::string("Q1"));
    spec.pump_coupling = units::mhz(number(s, "g_pump_mhz", where));
    spec.loss_coupling = units::mhz(number(s, "g_loss_mhz", where));
    spec.pump_detuning = units::mhz(number(s, "detuning_pump_mhz", where));
    spec.loss_detuning = units::mhz(number(s, "detuning_loss_mhz", where));
    spec.linewidth = units::mhz(number(s, "kappa_mhz", where));
    spec.thermal_occupation = number(s, "n_th", where, 0.0);
    out.shared = spec;
  }
  return out;
}

Matrix parse_matrix(const json& m, const std::string& where) {
  check_keys(m, where, {"re", "im"});
  auto grid = [&](const char* key) -> std::vector<std::vector<double>> {
    if (!m.contains(key)) return {};
    try {
      return m[key].get<std::vector<std::vector<double>>>();
    } catch (const json::exception&) {
      config_error(where + "." + key + " must be a 2-D array of numbers");
    }
  };
  const auto re = grid("re");
  const auto im = grid("im");
  if (re.size() != 4) config_error(where + " must be a 4x4 two-qubit matrix");
  Matrix out(4, 4);
  for (int i = 0; i < 4; ++i) {
    if (re[i].size() != 4 || (!im.empty() && (im.size() != 4 || im[i].size() != 4)))
      config_error(where + " must be a 4x4 two-qubit matrix");
    for (int j = 0; j < 4; ++j) out(i, j) = Complex(re[i][j], im.empty() ? 0.0 : im[i][j]);
  }
  return out;
}

ScheduleConfig parse_schedule(const json& s) {
  const std::string where = "schedule";
  check_keys(s, where, {"initial", "initial_matrix", "prep_error", "duration_us", "record_stride", "dt_ns", "mode",
                        "target", "phase_rad", "check_dt", "check_cutoff"});
  ScheduleConfig out;
  if (s.contains("initial")) {
    out.initial.clear();
    const json& init = s["initial"];
    if (init.is_string()) {
      out.initial.push_back(init.get<std::string>());
    } else if (init.is_array()) {
      for (const auto& v : init) {
        if (!v.is_string()) config_error("schedule.initial entries must be strings");
        out.initial.push_back(v.get<std::string>());
      }
    } else {
      config_error("schedule.initial must be a label or a list of labels");
    }
    if (out.initial.empty()) config_error("schedule.initial is empty");
    for (const auto& label : out.initial) one_of(label, {"gg", "ge", "eg", "ee"}, "schedule.initial");
  }
  if (s.contains("initial_matrix")) out.initial_matrix = parse_matrix(s["initial_matrix"], "schedule.initial_matrix");
  out.prep_error = number(s, "prep_error", where, 0.008);
  if (out.prep_error < 0.0 || out.prep_error > 1.0) config_error("schedule.prep_error must lie in [0, 1]");
  out.duration = units::us(number(s, "duration_us", where));
  if (!(out.duration > 0.0)) config_error("schedule.duration_us must be > 0");
  out.record_stride = static_cast<int>(integer(s, "record_stride", where, 20));
  if (out.record_stride < 0) config_error("schedule.record_stride must be >= 0");
  out.dt_max = units::ns(number(s, "dt_ns", where, 0.5));
  if (!(out.dt_max > 0.0)) config_error("schedule.dt_ns must be > 0");
  out.mode = text(s, "mode", where, std::string("evolve"));
  one_of(out.mode, {"evolve", "steady"}, "schedule.mode");
  out.target = text(s, "target", where, std::string("minus"));
  one_of(out.target, {"minus", "plus"}, "schedule.target");
  out.phase = number(s, "phase_rad", where, 0.0);
  out.check_dt = boolean(s, "check_dt", where, true);
  out.check_cutoff = boolean(s, "check_cutoff", where, true);
  return out;
}

EstimationConfig parse_estimation(const json& e) {
  const std::string where = "estimation";
  check_keys(e, where, {"method", "shots", "runs", "K", "n_boot", "N_M", "calibration_shots", "noise_preset", "flip",
                        "over_rotation_rad", "depolarizing_p", "inject_phase_rad"});
  EstimationConfig out;
  out.method = text(e, "method", where, std::string("exact"));
  one_of(out.method, {"exact", "qst", "shadow_standard", "shadow_robust"}, "estimation.method");
  out.shots = static_cast<int>(integer(e, "shots", where, 90000));
  out.runs = static_cast<int>(integer(e, "runs", where, 9));
  out.k = static_cast<int>(integer(e, "K", where, 100));
  out.n_boot = static_cast<int>(integer(e, "n_boot", where, 400));
  out.n_m = static_cast<int>(integer(e, "N_M", where, 1));
  out.calibration_shots = static_cast<int>(integer(e, "calibration_shots", where, 90000));
  if (out.shots < 1 || out.runs < 1 || out.k < 1 || out.n_boot < 2 || out.n_m < 1 || out.calibration_shots < 1)
    config_error("estimation counts must be positive (n_boot >= 2)");
  if (out.shots % out.runs != 0) config_error("estimation.runs must divide estimation.shots");
  if (out.shots % out.n_m != 0) config_error("estimation.N_M must divide estimation.shots");
  out.noise_preset = text(e, "noise_preset", where, std::string("ideal"));
  one_of(out.noise_preset, {"ideal", "default"}, "estimation.noise_preset");
  const bool d = out.noise_preset == "default";
  out.flip = number(e, "flip", where, d ? 0.016 : 0.0);
  out.rotation.over_rotation = number(e, "over_rotation_rad", where, d ? 0.02 : 0.0);
  out.rotation.depolarizing_p = number(e, "depolarizing_p", where, d ? 0.003 : 0.0);
  out.inject_phase = number(e, "inject_phase_rad", where, 0.0);
  if (out.flip < 0.0 || out.flip >= 0.5) config_error("estimation.flip must lie in [0, 0.5)");
  try {
    out.rotation.validate();
  } catch (const Error& err) {
    config_error(std::string("estimation: ") + err.what());
  }
  return out;
}

std::vector<AxisValue> axis_values(const json& a, const std::string& where) {
  std::vector<AxisValue> values;
  if (a.contains("values")) {
    if (a.contains("start") || a.contains("stop") || a.contains("count"))
      config_error(where + " takes either 'values' or 'start/stop/count'");
    if (!a["values"].is_array()) config_error(where + ".values must be an array");
    for (const auto& v : a["values"]) {
      if (v.is_number()) values.emplace_back(v.get<double>());
      else if (v.is_string()) values.emplace_back(v.get<std::string>());
      else config_error(where + ".values entries must be numbers or strings");
    }
  } else {
    const double start = number(a, "start", where);
    const double stop = number(a, "stop", where);
    const long long count = integer(a, "count", where);
    if (count < 2) config_error(where + ".count must be >= 2");
    for (long long i = 0; i < count; ++i) {
      // Snapped to 1e-9 so grid points print as typed.
      const double v = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
      values.emplace_back(std::round(v * 1e9) / 1e9);
    }
  }
  if (values.size() < 2) config_error(where + " needs at least two values");
  return values;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

json preset_tree(const std::string& name) {
  json tree = parse_toml_tree(kAppC, "preset:appC");
  if (name == "appC") return tree;
  if (name == "appC_073") {
    for (auto& r : tree["model"]["reservoirs"]) r["g_mhz"] = 0.73;
    return tree;
  }
  config_error("unknown preset '" + name + "' (known: appC, appC_073)");
}

ScenarioConfig scenario_from_tree(const json& tree) {
  check_keys(tree, "configuration", {"name", "model", "schedule", "estimation", "run", "sweep", "ablation"});
  ScenarioConfig c;
  c.name = tree.value("name", std::string("scenario"));
  if (!tree.contains("model")) config_error("missing table [model]");
  c.model = parse_model(tree["model"]);
  if (!tree.contains("schedule")) config_error("missing table [schedule]");
  c.schedule = parse_schedule(tree["schedule"]);
  c.estimation = parse_estimation(tree.value("estimation", json::object()));
  const json run = tree.value("run", json::object());
  check_keys(run, "run", {"seed", "output"});
  const long long seed = integer(run, "seed", "run", 1);
  if (seed < 0) config_error("run.seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.output_dir = text(run, "output", "run", std::string("out"));
  // Model-level checks (unknown sites, coupling warnings) surface as config errors.
  try {
    (void)build_scenario_model(c.model);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) config_error(std::string("model: ") + e.what());
    throw;
  }
  c.resolved = tree;
  return c;
}

ScenarioConfig parse_scenario(const std::string& toml_text, const std::string& origin) {
  return scenario_from_tree(resolve_presets(parse_toml_tree(toml_text, origin)));
}

ScenarioConfig load_scenario(const std::string& path) { return parse_scenario(read_file(path), path); }

SweepConfig parse_sweep(const std::string& toml_text, const std::string& origin) {
  json tree = resolve_presets(parse_toml_tree(toml_text, origin));
  SweepConfig s;
  s.base = scenario_from_tree(tree);
  if (!tree.contains("sweep")) config_error("missing table [sweep]");
  const json& sw = tree["sweep"];
  check_keys(sw, "sweep", {"axes", "max_points", "evaluate"});
  s.max_points = static_cast<int>(integer(sw, "max_points", "sweep", 2000));
  s.evaluate = text(sw, "evaluate", "sweep", std::string("steady"));
  one_of(s.evaluate, {"steady", "evolve"}, "sweep.evaluate");
  if (!sw.contains("axes") || !sw["axes"].is_array()) config_error("sweep.axes must be an array of tables");
  int i = 0;
  for (const auto& a : sw["axes"]) {
    const std::string where = "sweep.axes[" + std::to_string(i++) + "]";
    check_keys(a, where, {"path", "values", "start", "stop", "count"});
    SweepAxis axis{text(a, "path", where), axis_values(a, where)};
    // The path must resolve on the base configuration.
    json probe = tree;
    set_path(probe, axis.path, axis.values.front());
    s.axes.push_back(std::move(axis));
  }
  if (s.axes.empty() || s.axes.size() > 2) config_error("sweep needs one or two axes");
  long long points = 1;
  for (const auto& a : s.axes) points *= static_cast<long long>(a.values.size());
  if (points > s.max_points)
    config_error("sweep has " + std::to_string(points) + " points, above sweep.max_points = " + std::to_string(s.max_points));
  tree.erase("sweep");
  s.base_tree = tree;
  return s;
}

SweepConfig load_sweep(const std::string& path) { return parse_sweep(read_file(path), path); }

void set_path(json& tree, const std::string& path, const AxisValue& value) {
  json* node = &tree;
  std::size_t pos = 0;
  while (pos < path.size()) {
    std::size_t end = path.find_first_of(".[", pos);
    const std::string key = path.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (key.empty()) config_error("malformed path '" + path + "'");
    if (!node->is_object() || !node->contains(key)) config_error("path '" + path + "' does not exist (at '" + key + "')");
    node = &(*node)[key];
    pos = end == std::string::npos ? path.size() : end;
    while (pos < path.size() && path[pos] == '[') {
      const std::size_t close = path.find(']', pos);
      if (close == std::string::npos) config_error("malformed index in path '" + path + "'");
      const std::size_t idx = std::stoul(path.substr(pos + 1, close - pos - 1));
      if (!node->is_array() || idx >= node->size()) config_error("index out of range in path '" + path + "'");
      node = &(*node)[idx];
      pos = close + 1;
    }
    if (pos < path.size() && path[pos] == '.') ++pos;
  }
  if (node->is_object() || node->is_array()) config_error("path '" + path + "' names a table, not a value");
  if (std::holds_alternative<double>(value)) {
    if (!node->is_number()) config_error("path '" + path + "' holds a non-numeric value");
    const double v = std::get<double>(value);
    if (node->is_number_integer()) {
      if (v != std::floor(v)) config_error("path '" + path + "' holds an integer; got " + std::to_string(v));
      *node = static_cast<long long>(v);
    } else {
      *node = v;
    }
  } else {
    if (!node->is_string()) config_error("path '" + path + "' holds a non-string value");
    *node = std::get<std::string>(value);
  }
}

LiouvillianModel build_scenario_model(const ModelConfig& model) {
  if (model.shared) return build_shared_mode_model(model.lattice, *model.shared, model.noise, model.cutoff);
  return build_model(model.lattice, model.reservoirs, model.noise, model.cutoff);
}

DensityMatrix initial_state(const Matrix& qubit_rho, const SpaceLayout& layout) {
  const int n_qubits = static_cast<int>(std::count_if(layout.labels().begin(), layout.labels().end(),
                                                      [](const std::string& l) { return l.front() == 'Q'; }));
  if (qubit_rho.rows() != (1 << n_qubits)) fail(ErrorCode::kDimensionMismatch, "initial matrix size differs from qubit count");
  Matrix rho = qubit_rho;
  for (int k = n_qubits; k < layout.size(); ++k) {
    Matrix vac = Matrix::Zero(layout.dims()[k], layout.dims()[k]);
    vac(0, 0) = 1.0;
    rho = kron(rho, vac);
  }
  return DensityMatrix(OperatorMatrix(layout, rho));
}

DensityMatrix initial_state(const std::string& label, double prep_error, const SpaceLayout& layout) {
  if (label.size() != 2 || label.find_first_not_of("ge") != std::string::npos)
    fail(ErrorCode::kInvalidArgument, "initial state label must be one of gg, ge, eg, ee");
  Matrix q;
  if (label == "gg") {
    q = prepared_ground_state(2, prep_error).matrix();
  } else {
    const int idx = 2 * (label[0] == 'e') + (label[1] == 'e');
    q = Matrix::Zero(4, 4);
    q(idx, idx) = 1.0;
  }
  return initial_state(q, layout);
}

RotationErrorModel rotation_model(const EstimationConfig& e) { return e.rotation; }

AssignmentMatrix assignment_model(const EstimationConfig& e, int n_qubits) {
  return AssignmentMatrix::symmetric(n_qubits, e.flip);
}

}  // namespace qres
