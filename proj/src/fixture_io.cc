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

#include "gsa/fixture_io.h"

#include <filesystem>
#include <fstream>

#include "gsa/error.h"

namespace gsa {

using nlohmann::json;

namespace {

Residue ParseResidue(const json& v, Residue q) {
  uint64_t x = 0;
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    size_t used = 0;
    try {
      x = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw Error(ErrorCode::kFormat, "bad residue '" + s + "'");
    }
  } else if (v.is_number_unsigned()) {
    x = v.get<uint64_t>();
  } else {
    throw Error(ErrorCode::kFormat, "residue must be a decimal string");
  }
  if (x >= q) {
    throw Error(ErrorCode::kFormat,
                "residue " + std::to_string(x) + " not reduced mod " +
                    std::to_string(q));
  }
  return static_cast<Residue>(x);
}

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kFormat, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

FieldMatrix MatrixFromJson(const json& rows, size_t n_rows, size_t n_cols,
                           const PrimeField& f) {
  if (!rows.is_array() || rows.size() != n_rows) {
    throw Error(ErrorCode::kFormat, "matrix has wrong row count");
  }
  FieldMatrix m(n_rows, n_cols, f);
  for (size_t r = 0; r < n_rows; ++r) {
    std::vector<Residue> row = ResiduesFromJson(rows[r], f.modulus());
    if (row.size() != n_cols) {
      throw Error(ErrorCode::kFormat, "matrix has wrong column count");
    }
    std::copy(row.begin(), row.end(), m.Row(r).begin());
  }
  return m;
}

}  // namespace

json ResiduesToJson(std::span<const Residue> values) {
  json out = json::array();
  for (Residue v : values) out.push_back(std::to_string(v));
  return out;
}

std::vector<Residue> ResiduesFromJson(const json& j, Residue q) {
  if (!j.is_array()) throw Error(ErrorCode::kFormat, "expected array");
  std::vector<Residue> out;
  out.reserve(j.size());
  for (const json& v : j) out.push_back(ParseResidue(v, q));
  return out;
}

json ParamsToJson(const SchemeParams& p) {
  return json{{"K", p.users()},
              {"U", p.min_survivors()},
              {"S", p.group_size()},
              {"q", p.modulus()},
              {"L", p.input_length()}};
}

SchemeParams ParamsFromJson(const json& j) {
  try {
    return SchemeParams::Create(
        Field(j, "K").get<int>(), Field(j, "U").get<int>(),
        Field(j, "S").get<int>(), Field(j, "q").get<Residue>(),
        Field(j, "L").get<int64_t>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, e.what());
  }
}

json FixtureToJson(const Fixture& fx) {
  const CoefficientFamily& family = fx.family;
  json a = json::object();
  for (size_t g = 0; g < family.groups().size(); ++g) {
    a[SubsetKey(family.groups()[g])] =
        ResiduesToJson(family.vectors().Column(g));
  }
  json sk = json::object();
  for (int k = 1; k <= family.params().users(); ++k) {
    json rows = json::array();
    const FieldMatrix& s = fx.ums.S(k);
    for (size_t r = 0; r < s.rows(); ++r) rows.push_back(ResiduesToJson(s.Row(r)));
    sk[std::to_string(k)] = std::move(rows);
  }
  return json{{"format", "gsa-fixture/1"},
              {"params", ParamsToJson(family.params())},
              {"seed", family.seed()},
              {"attempts", fx.attempts},
              {"a", std::move(a)},
              {"Sk", std::move(sk)}};
}

Fixture FixtureFromJson(const json& j) {
  if (Field(j, "format") != "gsa-fixture/1") {
    throw Error(ErrorCode::kFormat, "unknown fixture format");
  }
  const SchemeParams p = ParamsFromJson(Field(j, "params"));
  const uint64_t seed = Field(j, "seed").get<uint64_t>();
  const int attempts = j.value("attempts", 1);

  const std::vector<Subset> groups = Combinations(p.users(), p.group_size());
  const json& a = Field(j, "a");
  if (!a.is_object() || a.size() != groups.size()) {
    throw Error(ErrorCode::kFormat, "expected one vector per group");
  }
  FieldMatrix vectors(p.num_combos(), groups.size(), p.field());
  for (size_t g = 0; g < groups.size(); ++g) {
    std::vector<Residue> col =
        ResiduesFromJson(Field(a, SubsetKey(groups[g]).c_str()), p.modulus());
    if (col.size() != static_cast<size_t>(p.num_combos())) {
      throw Error(ErrorCode::kFormat, "vector length mismatch");
    }
    vectors.SetColumn(g, col);
  }
  CoefficientFamily family =
      CoefficientFamily::FromVectors(p, seed, std::move(vectors));

  const json& sk = Field(j, "Sk");
  std::vector<UserMatrixSet::Entry> entries;
  for (int k = 1; k <= p.users(); ++k) {
    entries.push_back(
        {FieldMatrix(0, p.num_combos(), p.field()),
         MatrixFromJson(Field(sk, std::to_string(k).c_str()), p.num_pieces(),
                        p.f_len(), p.field())});
  }
  return Fixture{std::move(family), UserMatrixSet(p, seed, std::move(entries)),
                 attempts};
}

void SaveJson(const std::string& path, const json& j) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << j.dump(1) << '\n';
}

json LoadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, path + ": " + e.what());
  }
}

uint64_t FixtureChecksum(const Fixture& fixture) {
  const std::string text = FixtureToJson(fixture).dump();
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace gsa
