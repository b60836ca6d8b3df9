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

#include "qres/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qres/error.hpp"

namespace qres {

using json = nlohmann::json;

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json matrix_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"re", re}, {"im", im}};
}

Matrix matrix_from_json(const json& j) {
  try {
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("im").get<std::vector<std::vector<double>>>();
    const int n = static_cast<int>(re.size());
    Matrix m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = Complex(re.at(a).at(b), im.at(a).at(b));
    return m;
  } catch (const std::exception& e) {
    fail(ErrorCode::kIo, std::string("malformed matrix JSON: ") + e.what());
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    if (!out) fail(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::kIo, "cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json calibration_json(const CalibrationResult& c) {
  return {{"C", c.c}, {"G", c.g}, {"alpha", c.alpha}, {"beta", c.beta}};
}

CalibrationResult calibration_from_json(const json& j) {
  try {
    return CalibrationResult::from_marginals(j.at("C").get<std::vector<double>>());
  } catch (const json::exception& e) {
    fail(ErrorCode::kIo, std::string("malformed calibration JSON: ") + e.what());
  }
}

json dataset_sidecar(const ShadowDataset& d) {
  json j = {{"n_qubits", d.n_qubits}, {"N_U", d.n_u}, {"N_M", d.n_m}, {"N_S", d.records.size()},
            {"seed", d.seed},         {"runs", d.runs}};
  j["calibration"] = d.calibration ? calibration_json(*d.calibration) : json(nullptr);
  return j;
}

void save_dataset(const ShadowDataset& d, const std::filesystem::path& csv_path) {
  std::ostringstream csv;
  write_shot_csv(csv, d.records, d.n_qubits);
  write_atomic(csv_path, csv.str());
  std::filesystem::path side = csv_path;
  side.replace_extension(".json");
  write_atomic(side, dump(dataset_sidecar(d)));
}

ShadowDataset load_dataset(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) fail(ErrorCode::kIo, "cannot read " + csv_path.string());
  ShadowDataset d;
  d.records = read_shot_csv(in, &d.n_qubits);
  std::filesystem::path side = csv_path;
  side.replace_extension(".json");
  json j;
  try {
    j = json::parse(read_text(side));
    d.n_u = j.at("N_U").get<int>();
    d.n_m = j.at("N_M").get<int>();
    d.seed = j.at("seed").get<std::uint64_t>();
    d.runs = j.at("runs").get<int>();
    if (!j.at("calibration").is_null()) d.calibration = calibration_from_json(j["calibration"]);
  } catch (const json::exception& e) {
    fail(ErrorCode::kIo, "malformed dataset sidecar " + side.string() + ": " + e.what());
  }
  d.validate();
  return d;
}

json tomography_json(const TomographyResult& r) {
  return {{"expectations", r.raw_expectations},
          {"rho_linear", matrix_json(r.rho_linear.matrix())},
          {"rho_mle", matrix_json(r.rho_mle.matrix())},
          {"method", r.method}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qres
