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

#include <numbers>

namespace qres::units {

// Frequencies quoted as "2pi x f" map to angular values in rad/s.
inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double mhz(double f) { return two_pi * f * 1e6; }
constexpr double khz(double f) { return two_pi * f * 1e3; }
constexpr double to_mhz(double w) { return w / (two_pi * 1e6); }
constexpr double to_khz(double w) { return w / (two_pi * 1e3); }
constexpr double us(double t) { return t * 1e-6; }
constexpr double ns(double t) { return t * 1e-9; }
constexpr double to_us(double t) { return t * 1e6; }

}  // namespace qres::units
