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

#ifndef GSA_NET_SESSION_H_
#define GSA_NET_SESSION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "gsa/fixture_io.h"
#include "gsa/net/socket.h"
#include "gsa/scheme.h"
#include "json.hpp"

namespace gsa::net {

// What a client does in one session.
enum class DropAction {
  kNone,
  kAbsent,         // never connects
  kAfterRound1,    // sends ROUND1 and hangs up
  kBeforeRound2,   // waits for SURVIVORS, then hangs up
};

const char* DropActionName(DropAction a);

// Per-user rules: "never", "absent", "after_round1", "before_round2" or
// "p=<prob>" (independent drop chance before each round). Plan strings look
// like "2:after_round1,3:p=0.25,*:never"; "*" sets the default.
class DropPlan {
 public:
  static DropPlan Parse(const std::string& spec);
  // Deterministic in (seed, user).
  DropAction Resolve(int user, uint64_t seed) const;
  std::string ToString() const;

 private:
  struct Rule {
    std::string kind = "never";
    double probability = 0;
  };
  const Rule& RuleFor(int user) const;

  Rule default_;
  std::map<int, Rule> rules_;
};

struct Timeouts {
  int connect_ms = 10000;
  int round1_ms = 10000;
  int round2_ms = 10000;
  int result_ms = 30000;
};

struct SessionConfig {
  std::string fixture_path;
  std::string keys_dir;
  std::string inputs_dir;
  Endpoint listen;
  DropPlan drop_plan;
  uint64_t drop_seed = 0;
  Timeouts timeouts;
  bool byte_packing = true;

  // Relative paths are taken from `base_dir`.
  static SessionConfig FromJson(const nlohmann::json& j,
                                const std::string& base_dir);
  static SessionConfig Load(const std::string& path);
};

Timeouts TimeoutsFromJson(const nlohmann::json& j);

// Offline key share of one user, bound to a fixture by checksum.
//   {"format": "gsa-keys/1", "user": k, "fixture_checksum": "hex",
//    "params": {...}, "seed": .., "keys": {"1,2,3": "hex", ...}}
nlohmann::json KeyFileToJson(const KeyMaterial& keys, int user,
                             uint64_t fixture_checksum);
// Throws Error(kFormat) on schema errors or a checksum mismatch.
KeyMaterial KeyFileFromJson(const nlohmann::json& j, const SchemeParams& params,
                            int user, uint64_t fixture_checksum);
std::string KeyFilePath(const std::string& dir, int user);

//   {"format": "gsa-input/1", "owner": k, "symbols": "hex"}
nlohmann::json InputFileToJson(const InputVector& input);
InputVector InputFileFromJson(const nlohmann::json& j, const SchemeParams& params);
std::string InputFilePath(const std::string& dir, int user);

std::string ChecksumHex(uint64_t checksum);

}  // namespace gsa::net

#endif  // GSA_NET_SESSION_H_
