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

#ifndef GSA_NET_BENCH_H_
#define GSA_NET_BENCH_H_

#include <memory>
#include <string>
#include <vector>

#include "gsa/net/client.h"
#include "gsa/net/server.h"
#include "json.hpp"

namespace gsa::net {

struct LoopbackResult {
  AggregationRecord server;
  std::vector<ClientRecord> clients;  // users 1..K
};

// Server plus K client threads on 127.0.0.1 with an ephemeral port.
LoopbackResult RunLoopback(std::shared_ptr<const Fixture> fixture,
                           const KeyMaterial& keys,
                           const std::vector<InputVector>& inputs,
                           const DropPlan& plan, uint64_t drop_seed,
                           const Timeouts& timeouts, bool byte_packing);

struct BenchConfig {
  int users = 5;
  int min_survivors = 2;
  int group_size = 3;
  Residue modulus = 7;
  // Input lengths in symbols. "sizes_kb" in JSON converts KiB of packed
  // symbols to lengths, rounded up to the next admissible L.
  std::vector<int64_t> lengths;
  int repeats = 1;
  uint64_t seed = 1;
  std::string drop_plan;
  bool byte_packing = true;
  Timeouts timeouts;

  static BenchConfig FromJson(const nlohmann::json& j);
};

struct BenchRow {
  int users = 0;
  int min_survivors = 0;
  int group_size = 0;
  int64_t length = 0;
  Residue modulus = 0;
  int repeat = 0;
  double round1_ms = 0;
  double round2_ms = 0;
  double decode_ms = 0;
  double total_ms = 0;
  // Frame bytes of one surviving user per round.
  size_t bytes_r1 = 0;
  size_t bytes_r2 = 0;
  bool ok = false;
};

// Rows per (length, repeat); repeat -1 holds the mean over repeats.
std::vector<BenchRow> RunBench(const BenchConfig& cfg);

std::string BenchCsvHeader();
std::string BenchCsvRow(const BenchRow& row);

// Smallest admissible L holding at least `bytes` of packed symbols.
int64_t LengthForBytes(int users, int min_survivors, int group_size,
                       int64_t bytes, size_t symbol_width);

}  // namespace gsa::net

#endif  // GSA_NET_BENCH_H_
