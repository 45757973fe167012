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

#include "gsa/transcript_io.h"

#include "gsa/error.h"
#include "gsa/fixture_io.h"

namespace gsa {

using nlohmann::json;

namespace {

int HexDigit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

Subset SubsetFromJson(const json& j, int n, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::kFormat, std::string(what) + " must be an array");
  Subset s = j.get<Subset>();
  ValidateSubset(s, n, what);
  return s;
}

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kFormat, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

std::string EncodeSymbolsHex(std::span<const Residue> symbols) {
  static const char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(symbols.size() * 8);
  for (Residue v : symbols) {
    for (int b = 0; b < 4; ++b) {
      const unsigned byte = (v >> (8 * b)) & 0xff;
      out.push_back(kDigits[byte >> 4]);
      out.push_back(kDigits[byte & 0xf]);
    }
  }
  return out;
}

std::vector<Residue> DecodeSymbolsHex(const std::string& hex, Residue q) {
  if (hex.size() % 8 != 0) {
    throw Error(ErrorCode::kFormat, "hex symbol block length not a multiple of 8");
  }
  std::vector<Residue> out(hex.size() / 8);
  for (size_t i = 0; i < out.size(); ++i) {
    uint32_t v = 0;
    for (int b = 0; b < 4; ++b) {
      const int hi = HexDigit(hex[i * 8 + 2 * b]);
      const int lo = HexDigit(hex[i * 8 + 2 * b + 1]);
      if (hi < 0 || lo < 0) throw Error(ErrorCode::kFormat, "bad hex digit");
      v |= static_cast<uint32_t>(hi * 16 + lo) << (8 * b);
    }
    if (v >= q) throw Error(ErrorCode::kFormat, "symbol out of range");
    out[i] = v;
  }
  return out;
}

json TranscriptToJson(const Transcript& t) {
  json j;
  j["format"] = "gsa-transcript/1";
  j["params"] = ParamsToJson(t.params);
  j["seeds"] = {{"fixture", t.fixture_seed},
                {"keys", t.key_seed},
                {"inputs", t.input_seed}};
  j["U1"] = t.u1;
  j["U2"] = t.u2;
  json r1 = json::array();
  for (const Round1Message& m : t.round1) {
    r1.push_back({{"sender", m.sender}, {"symbols", EncodeSymbolsHex(m.symbols)}});
  }
  j["round1"] = std::move(r1);
  json r2 = json::array();
  for (const Round2Message& m : t.round2) {
    r2.push_back({{"sender", m.sender}, {"symbols", EncodeSymbolsHex(m.symbols)}});
  }
  j["round2"] = std::move(r2);
  j["decoded"] = t.decoded ? json(EncodeSymbolsHex(*t.decoded)) : json(nullptr);
  j["failure"] = t.failure;
  return j;
}

Transcript TranscriptFromJson(const json& j) {
  if (Field(j, "format") != "gsa-transcript/1") {
    throw Error(ErrorCode::kFormat, "not a gsa-transcript/1 document");
  }
  try {
    const SchemeParams p = ParamsFromJson(Field(j, "params"));
    const Residue q = p.modulus();
    const json& seeds = Field(j, "seeds");
    Transcript t{p,
                 Field(seeds, "fixture").get<uint64_t>(),
                 Field(seeds, "keys").get<uint64_t>(),
                 Field(seeds, "inputs").get<uint64_t>(),
                 SubsetFromJson(Field(j, "U1"), p.users(), "U1"),
                 SubsetFromJson(Field(j, "U2"), p.users(), "U2"),
                 {}, {}, {}, {}};
    for (const json& m : Field(j, "round1")) {
      Round1Message msg{Field(m, "sender").get<int>(),
                        DecodeSymbolsHex(Field(m, "symbols").get<std::string>(), q)};
      if (msg.symbols.size() != static_cast<size_t>(p.round1_symbols())) {
        throw Error(ErrorCode::kFormat, "round-1 block has wrong length");
      }
      t.round1.push_back(std::move(msg));
    }
    for (const json& m : Field(j, "round2")) {
      Round2Message msg{Field(m, "sender").get<int>(), t.u1,
                        DecodeSymbolsHex(Field(m, "symbols").get<std::string>(), q)};
      if (msg.symbols.size() != static_cast<size_t>(p.round2_symbols())) {
        throw Error(ErrorCode::kFormat, "round-2 block has wrong length");
      }
      t.round2.push_back(std::move(msg));
    }
    const json& decoded = Field(j, "decoded");
    if (!decoded.is_null()) {
      t.decoded = DecodeSymbolsHex(decoded.get<std::string>(), q);
    }
    t.failure = j.value("failure", "");
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, e.what());
  }
}

}  // namespace gsa
