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

#include "qres/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "qres/error.hpp"
#include "qres/io.hpp"
#include "qres/measurement_sim.hpp"
#include "qres/shadows.hpp"
#include "qres/tomography.hpp"
#include "qres/units.hpp"

namespace qres {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kDtGate = 1e-7;
constexpr double kCutoffGate = 1e-4;

Vector target_ket(const std::string& target, double phase) {
  const EigenbasisPhase p(phase);
  return target == "plus" ? psi_plus(p) : psi_minus(p);
}

// Phase at which the state best matches psi_target(phi).
double calibrated_phase(const Matrix& rho, const std::string& target) {
  const double phi = estimate_phase(rho).value();
  return target == "plus" ? EigenbasisPhase(phi - std::numbers::pi).value() : phi;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

fs::path output_dir(const ScenarioConfig& c, const RunOptions& o) { return o.output_dir.value_or(c.output_dir); }

std::uint64_t run_seed(const ScenarioConfig& c, const RunOptions& o) { return o.seed.value_or(c.seed); }

std::string observables_csv(const Observables& o) {
  const std::vector<double> v{o.fidelity, o.populations.gg, o.populations.plus, o.populations.minus,
                              o.populations.ee, o.purity, o.xx, o.yy, o.zz};
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

const char* const kObservableHeader = "fidelity,p_gg,p_plus,p_minus,p_ee,purity,XX,YY,ZZ";

json gate_json(const GateOutcome& g) {
  return {{"name", g.name}, {"status", g.status}, {"value", g.value}, {"threshold", g.threshold}, {"note", g.note}};
}

json model_manifest(const LiouvillianModel& model) {
  json freqs = json::array();
  for (const auto& o : model.oscillating) freqs.push_back(o.frequency);
  return {{"labels", model.layout().labels()},
          {"dims", model.layout().dims()},
          {"dimension", model.dim()},
          {"jumps", model.jump_labels},
          {"oscillating_frequencies_rad_s", freqs},
          {"max_angular_frequency_rad_s", max_angular_frequency(model)},
          {"warnings", model.warnings}};
}

json base_manifest(const ScenarioConfig& c, const RunOptions& o, const std::string& command) {
  return {{"tool", "qreservoir"},
          {"version", kVersion},
          {"command", command},
          {"name", c.name},
          {"seed", run_seed(c, o)},
          {"config", c.resolved},
          {"units", {{"config", "frequencies MHz (x 2 pi), rates kHz (x 2 pi), times us or ns"},
                     {"internal", "rad/s and s"}}}};
}

DensityMatrix schedule_initial(const ScenarioConfig& c, const SpaceLayout& layout, const std::string& label) {
  if (c.schedule.initial_matrix) return initial_state(*c.schedule.initial_matrix, layout);
  return initial_state(label, c.schedule.prep_error, layout);
}

std::vector<std::string> initial_labels(const ScenarioConfig& c) {
  if (c.schedule.initial_matrix) return {"matrix"};
  return c.schedule.initial;
}

EvolveOptions evolve_options(const ScenarioConfig& c) {
  EvolveOptions e;
  e.dt_max = c.schedule.dt_max;
  e.record_stride = c.schedule.record_stride;
  return e;
}

// The state handed to the measurement chain: the asymptotic state in steady
// mode, otherwise the final state of the first initial condition.
DensityMatrix scenario_state(const ScenarioConfig& c) {
  const LiouvillianModel model = build_scenario_model(c.model);
  const DensityMatrix rho0 = schedule_initial(c, model.layout(), initial_labels(c).front());
  if (c.schedule.mode == "steady") return qubit_register(asymptotic_state(model, rho0, c.schedule.duration));
  EvolveOptions e = evolve_options(c);
  e.record_stride = 0;
  return qubit_register(evolve(model, rho0, c.schedule.duration, e).final_state);
}

Matrix with_phase(const Matrix& rho, double phase) {
  const Matrix u = phase_rotation(EigenbasisPhase(phase));
  return u * rho * u.adjoint();
}

json noise_json(const EstimationConfig& e) {
  return {{"preset", e.noise_preset},
          {"flip", e.flip},
          {"over_rotation_rad", e.rotation.over_rotation},
          {"depolarizing_p", e.rotation.depolarizing_p},
          {"illustrative", true}};
}

json shadow_estimates(const ScenarioConfig& c, std::uint64_t seed, const Matrix& rho, bool robust,
                      const fs::path* out) {
  const EstimationConfig& e = c.estimation;
  const RotationErrorModel rot = rotation_model(e);
  const AssignmentMatrix a = assignment_model(e, 2);
  const Matrix rho_rot = with_phase(rho, e.inject_phase);

  ShadowDataset data = generate_shadow_dataset(rho_rot, e.shots / e.n_m, e.n_m, rot, a, derive_seed(seed, 1), e.runs);
  std::optional<CalibrationResult> cal;
  std::optional<ShadowDataset> ground_data;
  if (robust) {
    const ShadowDataset& ground = ground_data.emplace(generate_shadow_dataset(
        prepared_ground_state(2, 0.0).matrix(), e.calibration_shots, 1, rot, a, derive_seed(seed, 2), 1));
    cal = calibrate(ground);
    data.calibration = cal;
    if (out) save_dataset(ground, *out / "calibration_shots.csv");
  }
  if (out) save_dataset(data, *out / "shots.csv");
  const CalibrationResult* cp = cal ? &*cal : nullptr;

  const Matrix mean = mean_snapshot(data, cp);
  const double phi = calibrated_phase(Matrix((mean + mean.adjoint()) / 2.0), c.schedule.target);
  const EigenbasisPhase ph(phi), truth_ph(e.inject_phase);

  EstimatorOptions opt;
  opt.k = e.k;
  opt.n_boot = e.n_boot;
  opt.bootstrap_seed = derive_seed(seed, 3);
  if (ground_data) opt.calibration_data = &*ground_data;

  auto projector = [](const Vector& v) { return Matrix(v * v.adjoint()); };
  Matrix gg = Matrix::Zero(4, 4), ee = Matrix::Zero(4, 4);
  gg(0, 0) = 1.0;
  ee(3, 3) = 1.0;
  const Vector target = target_ket(c.schedule.target, phi);
  const Vector target_truth = target_ket(c.schedule.target, truth_ph.value());
  const std::vector<std::tuple<std::string, Matrix, Matrix>> observables{
      {"fidelity", projector(target), projector(target_truth)},
      {"p_gg", gg, gg},
      {"p_plus", projector(psi_plus(ph)), projector(psi_plus(truth_ph))},
      {"p_minus", projector(psi_minus(ph)), projector(psi_minus(truth_ph))},
      {"p_ee", ee, ee}};

  json est = json::object();
  int truncated = 0;
  for (const auto& [name, op, op_truth] : observables) {
    const Estimate x = estimate_observable(data, op, opt, cp);
    const double truth = (op_truth * rho_rot).trace().real();
    est[name] = {{"value", x.value}, {"stderr", x.std_error}, {"truth", truth},
                 {"deviation_sigma", x.std_error > 0 ? (x.value - truth) / x.std_error : 0.0}};
    truncated = x.truncated;
  }
  const Estimate p = estimate_purity(data, opt, cp);
  const double purity_truth = (rho_rot * rho_rot).trace().real();
  est["purity"] = {{"value", p.value}, {"stderr", p.std_error}, {"truth", purity_truth},
                   {"deviation_sigma", p.std_error > 0 ? (p.value - purity_truth) / p.std_error : 0.0}};

  return {{"method", robust ? "shadow_robust" : "shadow_standard"},
          {"N_S", data.records.size()},
          {"N_U", data.n_u},
          {"N_M", data.n_m},
          {"runs", data.runs},
          {"K", opt.k},
          {"n_boot", opt.n_boot},
          {"truncated_records", truncated},
          {"noise", noise_json(e)},
          {"calibration", cal ? calibration_json(*cal) : json(nullptr)},
          {"inject_phase_rad", e.inject_phase},
          {"estimated_phase_rad", phi},
          {"target", c.schedule.target},
          {"estimates", est}};
}

json tomography_estimates(const ScenarioConfig& c, std::uint64_t seed, const Matrix& rho) {
  const EstimationConfig& e = c.estimation;
  const int n_settings = setting_count(2);
  if (e.shots % n_settings != 0)
    fail(ErrorCode::kConfig, "estimation.shots must be a multiple of " + std::to_string(n_settings) + " for tomography");
  const int per_setting = e.shots / n_settings;
  const Matrix rho_rot = with_phase(rho, e.inject_phase);
  const Vector truth_ket = target_ket(c.schedule.target, e.inject_phase);
  const double truth = (truth_ket.adjoint() * rho_rot * truth_ket)(0).real();

  json datasets = json::array();
  std::vector<double> fid;
  Matrix avg = Matrix::Zero(4, 4);
  for (int k = 0; k < e.runs; ++k) {
    const auto ex = measure_pauli_expectations(rho_rot, per_setting, rotation_model(e), assignment_model(e, 2),
                                               derive_seed(seed, 100 + k));
    const TomographyResult r = reconstruct(ex);
    const double phi = calibrated_phase(r.rho_mle.matrix(), c.schedule.target);
    const Vector t = target_ket(c.schedule.target, phi);
    const double f = (t.adjoint() * r.rho_mle.matrix() * t)(0).real();
    fid.push_back(f);
    avg += r.rho_mle.matrix() / static_cast<double>(e.runs);
    json d = tomography_json(r);
    d["estimated_phase_rad"] = phi;
    d["fidelity"] = f;
    datasets.push_back(d);
  }
  double mean = 0.0;
  for (double f : fid) mean += f;
  mean /= fid.size();
  double var = 0.0;
  for (double f : fid) var += (f - mean) * (f - mean);
  const double sem = fid.size() > 1 ? std::sqrt(var / (fid.size() - 1) / fid.size()) : 0.0;
  return {{"method", "qst"},
          {"projection", "eigenvalue-truncation"},
          {"datasets", datasets},
          {"shots_per_setting", per_setting},
          {"noise", noise_json(e)},
          {"inject_phase_rad", e.inject_phase},
          {"target", c.schedule.target},
          {"fidelity_mean", mean},
          {"fidelity_stderr", sem},
          {"fidelity_truth", truth},
          {"rho_mle_mean", matrix_json(avg)},
          {"rho_exact", matrix_json(rho_rot)},
          {"state_fidelity_mean_vs_exact", state_fidelity(avg, rho_rot)}};
}

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string axis_text(const AxisValue& v) {
  return std::holds_alternative<double>(v) ? format_number(std::get<double>(v)) : std::get<std::string>(v);
}

std::string point_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%06d.csv", index);
  return buf;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) { return ShotStream(seed, k, 7).next(); }

Observables measure(const DensityMatrix& rho, const std::string& target, double phase) {
  const DensityMatrix q = qubit_register(rho);
  Observables o;
  o.fidelity = fidelity_to_pure(q, target_ket(target, phase));
  o.populations = eigenstate_populations(q, EigenbasisPhase(phase));
  o.purity = purity(q);
  o.xx = pauli_expectation(q, "XX");
  o.yy = pauli_expectation(q, "YY");
  o.zz = pauli_expectation(q, "ZZ");
  return o;
}

DensityMatrix asymptotic_state(const LiouvillianModel& model, const DensityMatrix& fallback_initial, double duration,
                               std::string* note) {
  if (!model.is_static()) {
    PeriodicInfo info;
    DensityMatrix rho = steady_state_periodic(model, common_period(model), {}, &info);
    if (note) *note = "period-averaged (" + std::to_string(info.periods) + " periods)";
    return rho;
  }
  try {
    DensityMatrix rho = steady_state(model);
    if (note) *note = "steady-state kernel";
    return rho;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateKernel) throw;
    EvolveOptions opt;
    opt.record_stride = 0;
    if (note) *note = std::string("degenerate kernel, evolved instead: ") + e.what();
    return evolve(model, fallback_initial, duration, opt).final_state;
  }
}

ScenarioResult run_scenario(const ScenarioConfig& c, const RunOptions& o) {
  const LiouvillianModel model = build_scenario_model(c.model);
  const fs::path out = output_dir(c, o);
  const std::uint64_t seed = run_seed(c, o);
  ScenarioResult result;
  json manifest = base_manifest(c, o, "simulate");
  manifest["model"] = model_manifest(model);
  const auto labels = initial_labels(c);

  std::ostringstream ts;
  ts << "initial,t_us," << kObservableHeader << "\n";
  if (c.schedule.mode == "evolve") {
    result.runs.resize(labels.size());
    parallel_for(static_cast<int>(labels.size()), o.threads, [&](int i) {
      TraceRun& run = result.runs[i];
      run.initial = labels[i];
      const DensityMatrix rho0 = schedule_initial(c, model.layout(), labels[i]);
      const DensityMatrix last =
          evolve_observed(model, rho0, c.schedule.duration, evolve_options(c), [&](double t, const DensityMatrix& rho) {
            run.times.push_back(t);
            run.series.push_back(measure(rho, c.schedule.target, c.schedule.phase));
            run.max_trace_drift = std::max(run.max_trace_drift, std::abs(rho.op().trace() - Complex(1.0)));
          });
      run.final_state = qubit_register(last);
    });
    for (const auto& run : result.runs)
      for (std::size_t k = 0; k < run.times.size(); ++k)
        ts << run.initial << ',' << format_number(units::to_us(run.times[k])) << ',' << observables_csv(run.series[k])
           << "\n";
    double drift = 0.0;
    for (const auto& run : result.runs) drift = std::max(drift, run.max_trace_drift);
    result.gates.push_back({"trace_drift", drift <= 1e-7 ? "pass" : "fail", drift, 1e-7, ""});
    if (c.schedule.check_dt) {
      EvolveOptions fine = evolve_options(c);
      fine.record_stride = 0;
      const DensityMatrix rho0 = schedule_initial(c, model.layout(), labels.front());
      const EvolutionResult coarse = evolve(model, rho0, c.schedule.duration, fine);
      fine.dt_max = 0.5 * coarse.dt;
      fine.max_steps *= 2;
      const DensityMatrix half = evolve(model, rho0, c.schedule.duration, fine).final_state;
      const double d = trace_distance(coarse.final_state.matrix(), half.matrix());
      result.gates.push_back({"dt_halving", d < kDtGate ? "pass" : "fail", d, kDtGate, "initial " + labels.front()});
      manifest["schedule"] = {{"dt_s", coarse.dt}, {"steps", coarse.steps}};
    } else {
      result.gates.push_back({"dt_halving", "skipped", 0.0, kDtGate, "disabled by schedule.check_dt"});
    }
  } else {
    std::string note;
    const DensityMatrix rho0 = schedule_initial(c, model.layout(), labels.front());
    result.asymptotic = qubit_register(asymptotic_state(model, rho0, c.schedule.duration, &note));
    result.asymptotic_observables = measure(*result.asymptotic, c.schedule.target, c.schedule.phase);
    manifest["asymptotic_solver"] = note;
  }

  // Cutoff doubling compares steady-state target fidelity for static models.
  if (c.schedule.check_cutoff && model.is_static()) {
    try {
      ModelConfig doubled = c.model;
      doubled.cutoff *= 2;
      const Vector t = target_ket(c.schedule.target, c.schedule.phase);
      const double f1 = fidelity_to_pure(steady_state(model), t);
      const double f2 = fidelity_to_pure(steady_state(build_scenario_model(doubled)), t);
      const double d = std::abs(f1 - f2);
      result.gates.push_back({"cutoff_doubling", d < kCutoffGate ? "pass" : "fail", d, kCutoffGate,
                              "cutoff " + std::to_string(c.model.cutoff) + " vs " + std::to_string(doubled.cutoff)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateKernel) throw;
      result.gates.push_back({"cutoff_doubling", "skipped", 0.0, kCutoffGate, e.what()});
    }
  } else {
    result.gates.push_back({"cutoff_doubling", "skipped", 0.0, kCutoffGate,
                            model.is_static() ? "disabled by schedule.check_cutoff" : "time-dependent model"});
  }

  if (c.estimation.method != "exact") {
    const Matrix rho = result.asymptotic ? result.asymptotic->matrix() : result.runs.front().final_state.matrix();
    const fs::path* shots_dir = o.write_files ? &out : nullptr;
    if (c.estimation.method == "qst") result.estimation = tomography_estimates(c, seed, rho);
    else result.estimation = shadow_estimates(c, seed, rho, c.estimation.method == "shadow_robust", shots_dir);
  }

  json gates = json::array();
  for (const auto& g : result.gates) gates.push_back(gate_json(g));
  manifest["gates"] = gates;
  json outputs = json::array({"summary.csv", "final_state.json", "manifest.json"});
  if (!result.runs.empty()) outputs.push_back("timeseries.csv");
  if (!result.estimation.is_null()) outputs.push_back("estimation.json");
  manifest["outputs"] = outputs;
  result.manifest = manifest;

  if (o.write_files) {
    std::ostringstream summary;
    summary << "initial," << kObservableHeader << "\n";
    json finals = json::object();
    for (const auto& run : result.runs) {
      summary << run.initial << ',' << observables_csv(measure(run.final_state, c.schedule.target, c.schedule.phase))
              << "\n";
      finals[run.initial] = matrix_json(run.final_state.matrix());
    }
    if (result.asymptotic) {
      summary << "asymptotic," << observables_csv(*result.asymptotic_observables) << "\n";
      finals["asymptotic"] = matrix_json(result.asymptotic->matrix());
    }
    if (!result.runs.empty()) write_atomic(out / "timeseries.csv", ts.str());
    write_atomic(out / "summary.csv", summary.str());
    write_atomic(out / "final_state.json", dump(finals));
    if (!result.estimation.is_null()) write_atomic(out / "estimation.json", dump(result.estimation));
    write_atomic(out / "manifest.json", dump(manifest));
  }
  return result;
}

std::vector<SweepRow> run_sweep(const SweepConfig& s, const RunOptions& o) {
  if (o.shard_count < 1 || o.shard_index < 0 || o.shard_index >= o.shard_count)
    fail(ErrorCode::kInvalidArgument, "shard index must lie in [0, shard_count)");
  const fs::path out = output_dir(s.base, o);
  const fs::path points_dir = out / "points";
  std::vector<std::vector<int>> grid;  // axis value indices per point
  {
    std::vector<int> idx(s.axes.size(), 0);
    while (true) {
      grid.push_back(idx);
      int a = static_cast<int>(s.axes.size()) - 1;
      while (a >= 0 && ++idx[a] == static_cast<int>(s.axes[a].values.size())) idx[a--] = 0;
      if (a < 0) break;
    }
  }
  const int n_points = static_cast<int>(grid.size());

  std::vector<int> todo;
  for (int i = 0; i < n_points; ++i)
    if (i % o.shard_count == o.shard_index && !(o.write_files && fs::exists(points_dir / point_name(i))))
      todo.push_back(i);

  std::vector<std::optional<SweepRow>> fresh(n_points);
  parallel_for(static_cast<int>(todo.size()), o.threads, [&](int t) {
    const int i = todo[t];
    SweepRow row;
    row.index = i;
    json tree = s.base_tree;
    for (std::size_t a = 0; a < s.axes.size(); ++a) {
      const AxisValue& v = s.axes[a].values[grid[i][a]];
      set_path(tree, s.axes[a].path, v);
      row.axis_values.push_back(axis_text(v));
    }
    try {
      const ScenarioConfig c = scenario_from_tree(tree);
      const LiouvillianModel model = build_scenario_model(c.model);
      const DensityMatrix rho0 = schedule_initial(c, model.layout(), initial_labels(c).front());
      DensityMatrix rho;
      if (s.evaluate == "steady") {
        rho = asymptotic_state(model, rho0, c.schedule.duration);
      } else {
        EvolveOptions e = evolve_options(c);
        e.record_stride = 0;
        rho = evolve(model, rho0, c.schedule.duration, e).final_state;
      }
      row.obs = measure(rho, c.schedule.target, c.schedule.phase);
      row.status = "ok";
    } catch (const std::exception& e) {
      row.status = "error";
      row.message = sanitize(e.what());
    }
    if (o.write_files) {
      std::string line = std::to_string(i);
      for (const auto& v : row.axis_values) line += "," + v;
      line += "," + (row.status == "ok" ? observables_csv(row.obs) : std::string(",,,,,,,,")) + "," + row.status + "," +
              row.message + "\n";
      write_atomic(points_dir / point_name(i), line);
    }
    fresh[i] = row;
  });

  std::vector<SweepRow> rows;
  bool complete = true;
  for (int i = 0; i < n_points; ++i) {
    if (fresh[i]) {
      rows.push_back(*fresh[i]);
      continue;
    }
    const fs::path p = points_dir / point_name(i);
    if (!o.write_files || !fs::exists(p)) {
      complete = false;
      continue;
    }
    std::string line = read_text(p);
    if (!line.empty() && line.back() == '\n') line.pop_back();
    const auto cells = split_csv(line);
    const std::size_t na = s.axes.size();
    if (cells.size() != 1 + na + 9 + 2) fail(ErrorCode::kIo, "malformed sweep point file " + p.string());
    SweepRow row;
    row.index = i;
    row.axis_values.assign(cells.begin() + 1, cells.begin() + 1 + na);
    row.status = cells[1 + na + 9];
    row.message = cells[1 + na + 10];
    if (row.status == "ok") {
      std::vector<double> v;
      for (std::size_t k = 0; k < 9; ++k) v.push_back(std::stod(cells[1 + na + k]));
      row.obs.fidelity = v[0];
      row.obs.populations = {v[1], v[2], v[3], v[4]};
      row.obs.purity = v[5];
      row.obs.xx = v[6];
      row.obs.yy = v[7];
      row.obs.zz = v[8];
    }
    rows.push_back(row);
  }

  if (o.write_files && complete) {
    std::string csv = "point";
    for (const auto& a : s.axes) csv += "," + a.path;
    csv += std::string(",") + kObservableHeader + ",status,message\n";
    int failures = 0;
    for (int i = 0; i < n_points; ++i) {
      csv += read_text(points_dir / point_name(i));
      failures += rows[i].status != "ok";
    }
    write_atomic(out / "sweep.csv", csv);
    json manifest = base_manifest(s.base, o, "sweep");
    json axes = json::array();
    for (const auto& a : s.axes) {
      json vals = json::array();
      for (const auto& v : a.values) {
        if (std::holds_alternative<double>(v)) vals.push_back(std::get<double>(v));
        else vals.push_back(std::get<std::string>(v));
      }
      axes.push_back({{"path", a.path}, {"values", vals}});
    }
    manifest["axes"] = axes;
    manifest["evaluate"] = s.evaluate;
    manifest["points"] = n_points;
    manifest["failed_points"] = failures;
    manifest["outputs"] = json::array({"sweep.csv", "points/", "manifest.json"});
    write_atomic(out / "manifest.json", dump(manifest));
  }
  return rows;
}

ModelConfig apply_toggle(ModelConfig m, const std::string& toggle) {
  if (toggle == "zero_resonator_thermal") {
    for (auto& r : m.reservoirs) r.thermal_occupation = 0.0;
    if (m.shared) m.shared->thermal_occupation = 0.0;
  } else if (toggle == "zero_intrinsic_decay") {
    m.noise.gamma1 = m.noise.gamma_plus = m.noise.gamma_minus = m.noise.gamma_phi = 0.0;
  } else if (toggle == "infinite_selectivity") {
    // Tenfold J with detunings following it: off-resonant leakage ~ (kappa/2J)^2 drops 100x.
    constexpr double kScale = 10.0;
    m.lattice.hopping *= kScale;
    for (auto& e : m.lattice.site_energies) e *= kScale;
    for (auto& r : m.reservoirs) r.detuning *= kScale;
    if (m.shared) {
      m.shared->pump_detuning *= kScale;
      m.shared->loss_detuning *= kScale;
    }
  } else {
    fail(ErrorCode::kConfig, "unknown ablation toggle '" + toggle + "'");
  }
  return m;
}

json run_ablation(const ScenarioConfig& c, const std::vector<std::string>& toggles, const RunOptions& o) {
  for (const auto& t : toggles) (void)apply_toggle(c.model, t);  // validates names up front
  std::vector<std::pair<std::string, ModelConfig>> variants{{"baseline", c.model}};
  for (const auto& t : toggles) variants.emplace_back(t, apply_toggle(c.model, t));
  ModelConfig all = c.model;
  for (const auto& t : toggles) all = apply_toggle(all, t);
  variants.emplace_back("combined", all);

  std::vector<double> fid(variants.size());
  std::vector<std::string> notes(variants.size());
  const Vector target = target_ket(c.schedule.target, c.schedule.phase);
  parallel_for(static_cast<int>(variants.size()), o.threads, [&](int i) {
    const LiouvillianModel model = build_scenario_model(variants[i].second);
    const DensityMatrix rho0 = schedule_initial(c, model.layout(), initial_labels(c).front());
    fid[i] = fidelity_to_pure(asymptotic_state(model, rho0, c.schedule.duration, &notes[i]), target);
  });

  json report = {{"target", c.schedule.target}, {"baseline_fidelity", fid[0]}, {"solver", notes[0]}};
  json list = json::array();
  for (std::size_t i = 1; i + 1 < variants.size(); ++i)
    list.push_back({{"toggle", variants[i].first}, {"fidelity", fid[i]}, {"delta", fid[i] - fid[0]}, {"solver", notes[i]}});
  report["toggles"] = list;
  report["combined"] = {{"toggles", toggles}, {"fidelity", fid.back()}, {"delta", fid.back() - fid[0]}};
  if (o.write_files) {
    const fs::path out = output_dir(c, o);
    write_atomic(out / "ablation.json", dump(report));
    json manifest = base_manifest(c, o, "ablate");
    manifest["toggles"] = toggles;
    manifest["outputs"] = json::array({"ablation.json", "manifest.json"});
    write_atomic(out / "manifest.json", dump(manifest));
  }
  return report;
}

json run_shadows(const ScenarioConfig& c, const RunOptions& o) {
  const fs::path out = output_dir(c, o);
  const bool robust = c.estimation.method != "shadow_standard";
  json r = shadow_estimates(c, run_seed(c, o), scenario_state(c).matrix(), robust, o.write_files ? &out : nullptr);
  if (o.write_files) {
    write_atomic(out / "shadows.json", dump(r));
    json manifest = base_manifest(c, o, "shadows");
    manifest["outputs"] = robust ? json::array({"shadows.json", "shots.csv", "shots.json", "calibration_shots.csv",
                                                "calibration_shots.json", "manifest.json"})
                                 : json::array({"shadows.json", "shots.csv", "shots.json", "manifest.json"});
    write_atomic(out / "manifest.json", dump(manifest));
  }
  return r;
}

json run_tomography(const ScenarioConfig& c, const RunOptions& o) {
  json r = tomography_estimates(c, run_seed(c, o), scenario_state(c).matrix());
  if (o.write_files) {
    const fs::path out = output_dir(c, o);
    write_atomic(out / "tomography.json", dump(r));
    json manifest = base_manifest(c, o, "tomography");
    manifest["outputs"] = json::array({"tomography.json", "manifest.json"});
    write_atomic(out / "manifest.json", dump(manifest));
  }
  return r;
}

json run_calibration(const ScenarioConfig& c, const RunOptions& o) {
  const EstimationConfig& e = c.estimation;
  const ShadowDataset ground = generate_shadow_dataset(prepared_ground_state(2, 0.0).matrix(), e.calibration_shots, 1,
                                                       rotation_model(e), assignment_model(e, 2),
                                                       derive_seed(run_seed(c, o), 2), e.runs > 1 && e.calibration_shots % e.runs == 0 ? e.runs : 1);
  const CalibrationResult cal = calibrate(ground);
  json r = {{"calibration", calibration_json(cal)}, {"N_S", ground.records.size()}, {"noise", noise_json(e)}};
  // Stability across the independent runs of the calibration data.
  if (ground.runs > 1) {
    json per_run = json::array();
    const std::size_t size = ground.records.size() / ground.runs;
    for (int k = 0; k < ground.runs; ++k) {
      ShadowDataset part = ground;
      part.records.assign(ground.records.begin() + k * size, ground.records.begin() + (k + 1) * size);
      part.n_u = static_cast<int>(size);
      part.runs = 1;
      per_run.push_back(calibration_json(calibrate(part)));
    }
    r["runs"] = per_run;
  }
  if (o.write_files) {
    const fs::path out = output_dir(c, o);
    save_dataset(ground, out / "calibration_shots.csv");
    write_atomic(out / "calibration.json", dump(r));
    json manifest = base_manifest(c, o, "calibrate-shadows");
    manifest["outputs"] = json::array({"calibration.json", "calibration_shots.csv", "calibration_shots.json", "manifest.json"});
    write_atomic(out / "manifest.json", dump(manifest));
  }
  return r;
}

}  // namespace qres
