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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "qres/qres.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* const kSteady = R"(
name = "capi"
[model]
preset = "appC"
[schedule]
duration_us = 5.0
mode = "steady"
)";

struct Config {
  qres_config* p = nullptr;
  ~Config() { qres_config_free(p); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  qres_string_free(s);
  return out;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(qres_version(), "0.1.0");
  EXPECT_STREQ(qres_status_name(QRES_OK), "ok");
  EXPECT_STREQ(qres_status_name(QRES_CONFIG), "config");
}

TEST(CApi, ParseErrorsCarryMessages) {
  Config c;
  EXPECT_EQ(qres_config_parse("[model]\npreset = \"nope\"\n[schedule]\nduration_us = 1.0\n", &c.p), QRES_CONFIG);
  EXPECT_EQ(c.p, nullptr);
  EXPECT_NE(std::string(qres_last_error()).find("nope"), std::string::npos);
  EXPECT_EQ(qres_config_load("/nonexistent.toml", &c.p), QRES_IO);
  EXPECT_EQ(qres_config_parse(nullptr, &c.p), QRES_INVALID_ARGUMENT);
}

TEST(CApi, SteadyStateMatchesSimulate) {
  Config c;
  ASSERT_EQ(qres_config_parse(kSteady, &c.p), QRES_OK) << qres_last_error();
  char* resolved = nullptr;
  ASSERT_EQ(qres_config_resolved(c.p, &resolved), QRES_OK);
  EXPECT_EQ(json::parse(take(resolved))["model"]["preset_applied"], "appC");

  qres_model* m = nullptr;
  ASSERT_EQ(qres_model_build(c.p, &m), QRES_OK);
  EXPECT_EQ(qres_model_dimension(m), 64);
  qres_state* s = nullptr;
  ASSERT_EQ(qres_model_steady_state(m, &s), QRES_OK) << qres_last_error();
  double f = 0.0, purity = 0.0, pops[4];
  ASSERT_EQ(qres_state_fidelity(s, "minus", 0.0, &f), QRES_OK);
  ASSERT_EQ(qres_state_purity(s, &purity), QRES_OK);
  ASSERT_EQ(qres_state_populations(s, 0.0, pops), QRES_OK);
  EXPECT_NEAR(pops[2], f, 1e-12);
  EXPECT_NEAR(pops[0] + pops[1] + pops[2] + pops[3], 1.0, 1e-9);
  double re[16], im[16];
  ASSERT_EQ(qres_state_matrix(s, re, im), QRES_OK);
  EXPECT_NEAR(re[0] + re[5] + re[10] + re[15], 1.0, 1e-9);
  EXPECT_EQ(qres_state_fidelity(s, "sideways", 0.0, &f), QRES_INVALID_ARGUMENT);

  qres_run_options o;
  qres_run_options_init(&o);
  o.write_files = 0;
  char* out = nullptr;
  ASSERT_EQ(qres_simulate(c.p, &o, &out), QRES_OK) << qres_last_error();
  const json summary = json::parse(take(out));
  EXPECT_NEAR(summary["asymptotic"]["fidelity"].get<double>(), pops[2], 1e-9);

  qres_state_free(s);
  qres_model_free(m);
}

TEST(CApi, EvolveRejectsBadLabel) {
  Config c;
  ASSERT_EQ(qres_config_parse(kSteady, &c.p), QRES_OK);
  qres_model* m = nullptr;
  ASSERT_EQ(qres_model_build(c.p, &m), QRES_OK);
  qres_state* s = nullptr;
  EXPECT_EQ(qres_model_evolve(m, "xy", 1.0, &s), QRES_INVALID_ARGUMENT);
  EXPECT_EQ(qres_model_evolve(m, "gg", -1.0, &s), QRES_INVALID_ARGUMENT);
  EXPECT_EQ(s, nullptr);
  qres_model_free(m);
}

TEST(CApi, AblateWithUnknownToggle) {
  Config c;
  ASSERT_EQ(qres_config_parse(kSteady, &c.p), QRES_OK);
  qres_run_options o;
  qres_run_options_init(&o);
  o.write_files = 0;
  char* out = nullptr;
  EXPECT_EQ(qres_ablate(c.p, "bogus", &o, &out), QRES_CONFIG);
  EXPECT_EQ(out, nullptr);
}

TEST(CApi, SweepWithoutTableIsAConfigError) {
  Config c;
  ASSERT_EQ(qres_config_parse(kSteady, &c.p), QRES_OK);
  qres_run_options o;
  qres_run_options_init(&o);
  o.write_files = 0;
  char* out = nullptr;
  EXPECT_EQ(qres_sweep(c.p, &o, &out), QRES_CONFIG);
}

}  // namespace
