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

#ifndef GSA_NET_SERVER_H_
#define GSA_NET_SERVER_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsa/error.h"
#include "gsa/fixture_io.h"
#include "gsa/net/session.h"
#include "json.hpp"

namespace gsa::net {

struct ServerOptions {
  Endpoint listen;
  std::shared_ptr<const Fixture> fixture;
  Timeouts timeouts;
  bool allow_byte_packing = true;
};

struct AggregationRecord {
  Subset u1;
  Subset u2;
  std::optional<std::vector<Residue>> sum;
  std::optional<ErrorCode> error_code;
  std::string error;
  double round1_ms = 0;
  double round2_ms = 0;
  double decode_ms = 0;
  double total_ms = 0;
  // Whole frames received, per user.
  std::map<int, size_t> bytes_r1;
  std::map<int, size_t> bytes_r2;
  std::vector<std::string> violations;
  // Live view: ROUND1 of U1 and ROUND2 of U2.
  std::optional<Transcript> transcript;

  bool ok() const { return sum.has_value(); }
  nlohmann::json ToJson() const;
};

// One aggregation epoch. The constructor binds the listening socket so the
// port is known (port 0 picks a free one) before Run().
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  uint16_t port() const;
  // Blocks until RESULT or ERROR has gone out to the survivors.
  AggregationRecord Run();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace gsa::net

#endif  // GSA_NET_SERVER_H_
