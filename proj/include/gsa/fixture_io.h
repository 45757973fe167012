/*
 * Copyright 2026 The groupwise-secagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GSA_FIXTURE_IO_H_
#define GSA_FIXTURE_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gsa/coeff_family.h"
#include "json.hpp"

namespace gsa {

// Family + user matrices as shared by server and users ahead of time.
// JSON layout:
//   {"format": "gsa-fixture/1",
//    "params": {"K":..,"U":..,"S":..,"q":..,"L":..},
//    "seed": .., "attempts": ..,
//    "a":  {"1,2,3": ["r0", "r1", ...], ...},      // residues as strings
//    "Sk": {"1": [["..", ...], ...], ...}}
struct Fixture {
  CoefficientFamily family;
  UserMatrixSet ums;
  int attempts = 1;
};

nlohmann::json ParamsToJson(const SchemeParams& params);
SchemeParams ParamsFromJson(const nlohmann::json& j);

nlohmann::json FixtureToJson(const Fixture& fixture);
// Throws Error(kFormat) on schema violations or unreduced residues.
Fixture FixtureFromJson(const nlohmann::json& j);

void SaveJson(const std::string& path, const nlohmann::json& j);
nlohmann::json LoadJson(const std::string& path);

// FNV-1a over the canonical serialization; binds key files to a fixture.
uint64_t FixtureChecksum(const Fixture& fixture);

nlohmann::json ResiduesToJson(std::span<const Residue> values);
std::vector<Residue> ResiduesFromJson(const nlohmann::json& j, Residue q);

}  // namespace gsa

#endif  // GSA_FIXTURE_IO_H_
