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

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "qres/qres.h"

namespace {

constexpr int kUsageExit = 64;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void print_error(const std::string& code, int status, const std::string& message) {
  std::fprintf(stderr, "{\"error\": {\"code\": \"%s\", \"status\": %d, \"message\": \"%s\"}}\n", escape(code).c_str(),
               status, escape(message).c_str());
}

int report(qres_status status) {
  print_error(qres_status_name(status), static_cast<int>(status), qres_last_error());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindblad simulator and estimation toolkit for reservoir-stabilized Bell states", "qres"};
  app.set_version_flag("--version", qres_version());
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, toggles;
  std::uint64_t seed = 0;
  int threads = 1, shard_index = 0, shard_count = 1;
  bool no_files = false;
  app.add_option("--config", config_path, "Scenario TOML file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Override run.seed");
  auto* out_opt = app.add_option("--out", out_dir, "Override run.output");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--no-files", no_files, "Print the summary without writing output files");

  auto* simulate = app.add_subcommand("simulate", "Time evolution or steady state of a scenario");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over one or two config paths");
  sweep->add_option("--shard-index", shard_index, "Shard of this process")->check(CLI::NonNegativeNumber);
  sweep->add_option("--shard-count", shard_count, "Total number of shards")->check(CLI::PositiveNumber);
  auto* ablate = app.add_subcommand("ablate", "Steady-state fidelity with error sources switched off");
  auto* toggles_opt = ablate->add_option("--toggles", toggles, "Comma-separated toggles (default: [ablation].toggles)");
  auto* shadows = app.add_subcommand("shadows", "Generate shadow data and estimate fidelity, populations and purity");
  auto* tomography = app.add_subcommand("tomography", "Pauli tomography with eigenvalue-truncation projection");
  auto* calibrate = app.add_subcommand("calibrate-shadows", "Noise calibration from ground-state shadow data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", kUsageExit, e.what());
    return kUsageExit;
  }

  qres_run_options options;
  qres_run_options_init(&options);
  if (*out_opt) options.output_dir = out_dir.c_str();
  if (*seed_opt) {
    options.has_seed = 1;
    options.seed = seed;
  }
  options.threads = threads;
  options.write_files = no_files ? 0 : 1;
  options.shard_index = shard_index;
  options.shard_count = shard_count;

  qres_config* config = nullptr;
  qres_status status = qres_config_load(config_path.c_str(), &config);
  if (status != QRES_OK) return report(status);

  char* summary = nullptr;
  if (*simulate) status = qres_simulate(config, &options, &summary);
  else if (*sweep) status = qres_sweep(config, &options, &summary);
  else if (*ablate) status = qres_ablate(config, *toggles_opt ? toggles.c_str() : nullptr, &options, &summary);
  else if (*shadows) status = qres_shadows(config, &options, &summary);
  else if (*tomography) status = qres_tomography(config, &options, &summary);
  else if (*calibrate) status = qres_calibrate_shadows(config, &options, &summary);
  qres_config_free(config);
  if (status != QRES_OK) return report(status);
  std::fputs(summary, stdout);
  qres_string_free(summary);
  return 0;
}
