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

// Serialization helpers shared by the runners.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qres/qlinalg.hpp"
#include "qres/shadows.hpp"
#include "qres/tomography.hpp"

namespace qres {

/// Fixed "%.10g" rendering used in every CSV cell.
std::string format_number(double v);

/// {"re": [[...]], "im": [[...]]}, row-major.
nlohmann::json matrix_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

nlohmann::json calibration_json(const CalibrationResult& c);
CalibrationResult calibration_from_json(const nlohmann::json& j);

/// Sidecar metadata of a shot CSV (N_U, N_M, seed, runs, calibration).
nlohmann::json dataset_sidecar(const ShadowDataset& d);
void save_dataset(const ShadowDataset& d, const std::filesystem::path& csv_path);
/// Reads `csv_path` and its `.json` sidecar.
ShadowDataset load_dataset(const std::filesystem::path& csv_path);

nlohmann::json tomography_json(const TomographyResult& r);

/// Stable JSON text (2-space indent, trailing newline).
std::string dump(const nlohmann::json& j);

}  // namespace qres
