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

#ifndef GSA_NET_CLIENT_H_
#define GSA_NET_CLIENT_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsa/error.h"
#include "gsa/fixture_io.h"
#include "gsa/net/session.h"
#include "json.hpp"

namespace gsa::net {

struct ClientOptions {
  Endpoint server;
  std::shared_ptr<const Fixture> fixture;
  // Keys of this user only.
  std::shared_ptr<const KeyMaterial> keys;
  InputVector input;
  DropAction drop = DropAction::kNone;
  bool request_byte_packing = true;
  Timeouts timeouts;
};

struct ClientRecord {
  int user = 0;
  DropAction drop = DropAction::kNone;
  SymbolPacking packing = SymbolPacking::kWord;
  // Whole frames sent, header included.
  size_t bytes_r1 = 0;
  size_t bytes_r2 = 0;
  size_t payload_r1 = 0;
  size_t payload_r2 = 0;
  Subset survivors;
  std::optional<std::vector<Residue>> result;
  std::optional<ErrorCode> error_code;
  std::string error;

  nlohmann::json ToJson() const;
};

// Never throws for network trouble; failures land in the record.
ClientRecord RunClient(const ClientOptions& options);

}  // namespace gsa::net

#endif  // GSA_NET_CLIENT_H_
