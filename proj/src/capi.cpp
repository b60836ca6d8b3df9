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

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "qres/config.hpp"
#include "qres/error.hpp"
#include "qres/harness.hpp"
#include "qres/io.hpp"
#include "qres/qres.h"
#include "qres/units.hpp"

struct qres_config {
  std::string text;
  std::string origin;
  qres::ScenarioConfig scenario;
};

struct qres_model {
  qres::ModelConfig config;
  qres::LiouvillianModel model;
  double prep_error = 0.0;
  double duration = 0.0;
};

struct qres_state {
  qres::DensityMatrix rho;
};

namespace {

using json = nlohmann::json;

thread_local std::string g_last_error;

template <class F>
qres_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return QRES_OK;
  } catch (const qres::Error& e) {
    g_last_error = e.what();
    return static_cast<qres_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QRES_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QRES_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) qres::fail(qres::ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qres::RunOptions run_options(const qres_run_options* o) {
  qres::RunOptions r;
  if (!o) return r;
  if (o->output_dir) r.output_dir = o->output_dir;
  if (o->has_seed) r.seed = o->seed;
  if (o->threads < 1) qres::fail(qres::ErrorCode::kInvalidArgument, "threads must be >= 1");
  r.threads = o->threads;
  r.write_files = o->write_files != 0;
  r.shard_index = o->shard_index;
  r.shard_count = o->shard_count;
  return r;
}

json gates_json(const std::vector<qres::GateOutcome>& gates) {
  json out = json::array();
  for (const auto& g : gates)
    out.push_back({{"name", g.name}, {"status", g.status}, {"value", g.value}, {"threshold", g.threshold}, {"note", g.note}});
  return out;
}

json observables_json(const qres::Observables& o) {
  return {{"fidelity", o.fidelity}, {"p_gg", o.populations.gg}, {"p_plus", o.populations.plus},
          {"p_minus", o.populations.minus}, {"p_ee", o.populations.ee}, {"purity", o.purity},
          {"XX", o.xx}, {"YY", o.yy}, {"ZZ", o.zz}};
}

std::vector<std::string> split_toggles(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

extern "C" {

const char* qres_version(void) { return qres::kVersion; }

const char* qres_status_name(qres_status status) {
  if (status == QRES_OK) return "ok";
  return qres::error_code_name(static_cast<qres::ErrorCode>(status));
}

const char* qres_last_error(void) { return g_last_error.c_str(); }

void qres_string_free(char* s) { std::free(s); }

void qres_run_options_init(qres_run_options* o) {
  if (!o) return;
  o->output_dir = nullptr;
  o->has_seed = 0;
  o->seed = 0;
  o->threads = 1;
  o->write_files = 1;
  o->shard_index = 0;
  o->shard_count = 1;
}

qres_status qres_config_load(const char* path, qres_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto c = std::make_unique<qres_config>();
    c->text = qres::read_text(path);
    c->origin = path;
    c->scenario = qres::parse_scenario(c->text, c->origin);
    *out = c.release();
  });
}

qres_status qres_config_parse(const char* toml_text, qres_config** out) {
  return guarded([&] {
    require(toml_text, "toml_text");
    require(out, "out");
    *out = nullptr;
    auto c = std::make_unique<qres_config>();
    c->text = toml_text;
    c->origin = "<string>";
    c->scenario = qres::parse_scenario(c->text, c->origin);
    *out = c.release();
  });
}

qres_status qres_config_resolved(const qres_config* config, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    *json_out = copy_string(qres::dump(config->scenario.resolved));
  });
}

void qres_config_free(qres_config* config) { delete config; }

qres_status qres_simulate(const qres_config* config, const qres_run_options* options, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    const qres::ScenarioResult r = qres::run_scenario(config->scenario, run_options(options));
    json summary = {{"command", "simulate"}, {"name", config->scenario.name}, {"gates", gates_json(r.gates)}};
    json finals = json::object();
    for (const auto& run : r.runs) {
      json s = observables_json(qres::measure(run.final_state, config->scenario.schedule.target,
                                              config->scenario.schedule.phase));
      double peak = 0.0, t_peak = 0.0;
      for (std::size_t k = 0; k < run.series.size(); ++k)
        if (run.series[k].fidelity > peak) {
          peak = run.series[k].fidelity;
          t_peak = qres::units::to_us(run.times[k]);
        }
      s["peak_fidelity"] = peak;
      s["peak_time_us"] = t_peak;
      finals[run.initial] = s;
    }
    summary["final"] = finals;
    if (r.asymptotic_observables) summary["asymptotic"] = observables_json(*r.asymptotic_observables);
    if (!r.estimation.is_null()) summary["estimation"] = r.estimation;
    *json_out = copy_string(qres::dump(summary));
  });
}

qres_status qres_sweep(const qres_config* config, const qres_run_options* options, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    const qres::SweepConfig s = qres::parse_sweep(config->text, config->origin);
    const auto rows = qres::run_sweep(s, run_options(options));
    std::size_t failed = 0, total = 1;
    for (const auto& a : s.axes) total *= a.values.size();
    const qres::SweepRow* best = nullptr;
    for (const auto& row : rows) {
      if (row.status != "ok") {
        ++failed;
        continue;
      }
      if (!best || row.obs.fidelity > best->obs.fidelity) best = &row;
    }
    json summary = {{"command", "sweep"}, {"points", total}, {"computed_or_loaded", rows.size()}, {"failed", failed},
                    {"complete", rows.size() == total}};
    if (best) summary["best"] = {{"point", best->index}, {"axis_values", best->axis_values}, {"fidelity", best->obs.fidelity}};
    *json_out = copy_string(qres::dump(summary));
  });
}

qres_status qres_ablate(const qres_config* config, const char* toggles, const qres_run_options* options,
                        char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    std::vector<std::string> list;
    if (toggles) {
      list = split_toggles(toggles);
    } else {
      const json& tree = config->scenario.resolved;
      if (tree.contains("ablation")) {
        const json& a = tree["ablation"];
        if (!a.is_object() || !a.contains("toggles") || !a["toggles"].is_array())
          qres::fail(qres::ErrorCode::kConfig, "ablation.toggles must be an array of strings");
        for (const auto& t : a["toggles"]) {
          if (!t.is_string()) qres::fail(qres::ErrorCode::kConfig, "ablation.toggles must be an array of strings");
          list.push_back(t.get<std::string>());
        }
      }
    }
    *json_out = copy_string(qres::dump(qres::run_ablation(config->scenario, list, run_options(options))));
  });
}

qres_status qres_shadows(const qres_config* config, const qres_run_options* options, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    *json_out = copy_string(qres::dump(qres::run_shadows(config->scenario, run_options(options))));
  });
}

qres_status qres_tomography(const qres_config* config, const qres_run_options* options, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    *json_out = copy_string(qres::dump(qres::run_tomography(config->scenario, run_options(options))));
  });
}

qres_status qres_calibrate_shadows(const qres_config* config, const qres_run_options* options, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    *json_out = copy_string(qres::dump(qres::run_calibration(config->scenario, run_options(options))));
  });
}

qres_status qres_model_build(const qres_config* config, qres_model** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    *out = new qres_model{config->scenario.model, qres::build_scenario_model(config->scenario.model),
                          config->scenario.schedule.prep_error, config->scenario.schedule.duration};
  });
}

int qres_model_dimension(const qres_model* model) { return model ? model->model.dim() : 0; }

void qres_model_free(qres_model* model) { delete model; }

qres_status qres_model_steady_state(const qres_model* model, qres_state** out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = nullptr;
    const qres::DensityMatrix rho0 = qres::initial_state("gg", model->prep_error, model->model.layout());
    *out = new qres_state{qres::qubit_register(qres::asymptotic_state(model->model, rho0, model->duration))};
  });
}

qres_status qres_model_evolve(const qres_model* model, const char* initial, double duration_us, qres_state** out) {
  return guarded([&] {
    require(model, "model");
    require(initial, "initial");
    require(out, "out");
    *out = nullptr;
    const qres::DensityMatrix rho0 = qres::initial_state(initial, model->prep_error, model->model.layout());
    qres::EvolveOptions opt;
    opt.record_stride = 0;
    const auto r = qres::evolve(model->model, rho0, qres::units::us(duration_us), opt);
    *out = new qres_state{qres::qubit_register(r.final_state)};
  });
}

void qres_state_free(qres_state* state) { delete state; }

qres_status qres_state_matrix(const qres_state* state, double* re, double* im) {
  return guarded([&] {
    require(state, "state");
    require(re, "re");
    require(im, "im");
    const qres::Matrix& m = state->rho.matrix();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        re[4 * i + j] = m(i, j).real();
        im[4 * i + j] = m(i, j).imag();
      }
  });
}

qres_status qres_state_fidelity(const qres_state* state, const char* target, double phase, double* out) {
  return guarded([&] {
    require(state, "state");
    require(target, "target");
    require(out, "out");
    const std::string t = target;
    if (t != "minus" && t != "plus") qres::fail(qres::ErrorCode::kInvalidArgument, "target must be 'minus' or 'plus'");
    const qres::EigenbasisPhase p(phase);
    *out = qres::fidelity_to_pure(state->rho, t == "plus" ? qres::psi_plus(p) : qres::psi_minus(p));
  });
}

qres_status qres_state_populations(const qres_state* state, double phase, double out[4]) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    const qres::PopulationSet p = qres::eigenstate_populations(state->rho, qres::EigenbasisPhase(phase));
    out[0] = p.gg;
    out[1] = p.plus;
    out[2] = p.minus;
    out[3] = p.ee;
  });
}

qres_status qres_state_purity(const qres_state* state, double* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    *out = qres::purity(state->rho);
  });
}

}  // extern "C"
