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

#include "gsa/net/session.h"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "gsa/error.h"
#include "gsa/rng.h"
#include "gsa/transcript_io.h"

namespace gsa::net {

using nlohmann::json;

const char* DropActionName(DropAction a) {
  switch (a) {
    case DropAction::kNone: return "none";
    case DropAction::kAbsent: return "absent";
    case DropAction::kAfterRound1: return "after_round1";
    case DropAction::kBeforeRound2: return "before_round2";
  }
  return "?";
}

DropPlan DropPlan::Parse(const std::string& spec) {
  DropPlan plan;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    const size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "drop rule '" + item + "' needs the form user:kind");
    }
    const std::string who = item.substr(0, colon);
    const std::string what = item.substr(colon + 1);
    Rule rule;
    if (what.rfind("p=", 0) == 0) {
      rule.kind = "p";
      try {
        rule.probability = std::stod(what.substr(2));
      } catch (const std::exception&) {
        rule.probability = -1;
      }
      if (!(rule.probability >= 0 && rule.probability <= 1)) {
        throw Error(ErrorCode::kInvalidArgument, "bad drop probability in '" + item + "'");
      }
    } else if (what == "never" || what == "absent" || what == "after_round1" ||
               what == "before_round2") {
      rule.kind = what;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown drop kind '" + what + "'");
    }
    if (who == "*") {
      plan.default_ = rule;
    } else {
      int user = 0;
      try {
        user = std::stoi(who);
      } catch (const std::exception&) {
      }
      if (user < 1 || user > 65535) {
        throw Error(ErrorCode::kInvalidArgument, "bad user in drop rule '" + item + "'");
      }
      plan.rules_[user] = rule;
    }
  }
  return plan;
}

const DropPlan::Rule& DropPlan::RuleFor(int user) const {
  const auto it = rules_.find(user);
  return it == rules_.end() ? default_ : it->second;
}

DropAction DropPlan::Resolve(int user, uint64_t seed) const {
  const Rule& r = RuleFor(user);
  if (r.kind == "absent") return DropAction::kAbsent;
  if (r.kind == "after_round1") return DropAction::kAfterRound1;
  if (r.kind == "before_round2") return DropAction::kBeforeRound2;
  if (r.kind == "p") {
    Rng rng(seed, Stream::kDropPlan, static_cast<uint64_t>(user));
    if (rng.UniformUnit() < r.probability) return DropAction::kAbsent;
    if (rng.UniformUnit() < r.probability) return DropAction::kBeforeRound2;
  }
  return DropAction::kNone;
}

std::string DropPlan::ToString() const {
  auto one = [](const Rule& r) {
    if (r.kind != "p") return r.kind;
    char buf[32];
    std::snprintf(buf, sizeof buf, "p=%g", r.probability);
    return std::string(buf);
  };
  std::string out;
  for (const auto& [user, rule] : rules_) {
    out += std::to_string(user) + ":" + one(rule) + ",";
  }
  return out + "*:" + one(default_);
}

Timeouts TimeoutsFromJson(const json& j) {
  Timeouts t;
  if (!j.is_object()) return t;
  t.connect_ms = j.value("connect_ms", t.connect_ms);
  t.round1_ms = j.value("round1_ms", t.round1_ms);
  t.round2_ms = j.value("round2_ms", t.round2_ms);
  t.result_ms = j.value("result_ms", t.result_ms);
  return t;
}

SessionConfig SessionConfig::FromJson(const json& j, const std::string& base_dir) {
  namespace fs = std::filesystem;
  auto path = [&](const char* key) -> std::string {
    if (!j.contains(key)) return {};
    const fs::path p = j.at(key).get<std::string>();
    return p.is_absolute() ? p.string() : (fs::path(base_dir) / p).string();
  };
  try {
    SessionConfig c;
    c.fixture_path = path("fixture");
    c.keys_dir = path("keys_dir");
    c.inputs_dir = path("inputs_dir");
    c.listen = Endpoint::Parse(j.value("listen", std::string("127.0.0.1:7311")));
    c.drop_plan = DropPlan::Parse(j.value("drop_plan", std::string()));
    c.drop_seed = j.value("drop_seed", uint64_t{0});
    if (j.contains("timeouts")) c.timeouts = TimeoutsFromJson(j.at("timeouts"));
    c.byte_packing = j.value("byte_packing", true);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("session config: ") + e.what());
  }
}

SessionConfig SessionConfig::Load(const std::string& path) {
  return FromJson(LoadJson(path),
                  std::filesystem::path(path).parent_path().string());
}

std::string ChecksumHex(uint64_t checksum) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(checksum));
  return buf;
}

json KeyFileToJson(const KeyMaterial& keys, int user, uint64_t checksum) {
  json j;
  j["format"] = "gsa-keys/1";
  j["user"] = user;
  j["fixture_checksum"] = ChecksumHex(checksum);
  j["params"] = ParamsToJson(keys.params());
  j["seed"] = keys.seed();
  json k = json::object();
  for (size_t g = 0; g < keys.groups().size(); ++g) {
    if (Contains(keys.groups()[g], user)) {
      k[SubsetKey(keys.groups()[g])] = EncodeSymbolsHex(keys.Key(g));
    }
  }
  j["keys"] = std::move(k);
  return j;
}

KeyMaterial KeyFileFromJson(const json& j, const SchemeParams& params, int user,
                            uint64_t checksum) {
  try {
    if (j.at("format") != "gsa-keys/1") {
      throw Error(ErrorCode::kFormat, "not a gsa-keys/1 document");
    }
    if (j.at("user").get<int>() != user) {
      throw Error(ErrorCode::kFormat, "key file belongs to another user");
    }
    if (j.at("fixture_checksum").get<std::string>() != ChecksumHex(checksum)) {
      throw Error(ErrorCode::kFormat,
                  "key file of user " + std::to_string(user) +
                      " does not match the fixture checksum");
    }
    if (!(ParamsFromJson(j.at("params")) == params)) {
      throw Error(ErrorCode::kFormat, "key file parameters differ from the fixture");
    }
    KeyMaterial keys = KeyMaterial::Zero(params).ForUser(user);
    const json& k = j.at("keys");
    for (size_t g = 0; g < keys.groups().size(); ++g) {
      if (!Contains(keys.groups()[g], user)) continue;
      const std::string name = SubsetKey(keys.groups()[g]);
      if (!k.contains(name)) throw Error(ErrorCode::kFormat, "missing key {" + name + "}");
      std::vector<Residue> key =
          DecodeSymbolsHex(k.at(name).get<std::string>(), params.modulus());
      if (key.size() != static_cast<size_t>(params.key_len())) {
        throw Error(ErrorCode::kFormat, "key {" + name + "} has wrong length");
      }
      keys.SetKey(g, std::move(key));
    }
    return keys;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("key file: ") + e.what());
  }
}

std::string KeyFilePath(const std::string& dir, int user) {
  return (std::filesystem::path(dir) / ("user_" + std::to_string(user) + ".keys.json")).string();
}

json InputFileToJson(const InputVector& input) {
  return json{{"format", "gsa-input/1"},
              {"owner", input.owner},
              {"symbols", EncodeSymbolsHex(input.symbols)}};
}

InputVector InputFileFromJson(const json& j, const SchemeParams& params) {
  try {
    if (j.at("format") != "gsa-input/1") {
      throw Error(ErrorCode::kFormat, "not a gsa-input/1 document");
    }
    InputVector in{j.at("owner").get<int>(),
                   DecodeSymbolsHex(j.at("symbols").get<std::string>(), params.modulus())};
    return in;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("input file: ") + e.what());
  }
}

std::string InputFilePath(const std::string& dir, int user) {
  return (std::filesystem::path(dir) / ("user_" + std::to_string(user) + ".input.json")).string();
}

}  // namespace gsa::net
