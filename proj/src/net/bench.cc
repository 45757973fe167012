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

#include "gsa/net/bench.h"

#include <cstdio>
#include <thread>

#include "gsa/rng.h"

namespace gsa::net {

using nlohmann::json;

LoopbackResult RunLoopback(std::shared_ptr<const Fixture> fixture,
                           const KeyMaterial& keys,
                           const std::vector<InputVector>& inputs,
                           const DropPlan& plan, uint64_t drop_seed,
                           const Timeouts& timeouts, bool byte_packing) {
  Server server(ServerOptions{Endpoint{"127.0.0.1", 0}, fixture, timeouts, byte_packing});
  const Endpoint at{"127.0.0.1", server.port()};
  LoopbackResult out;
  out.clients.resize(inputs.size());
  std::vector<std::thread> threads;
  for (size_t i = 0; i < inputs.size(); ++i) {
    const int k = inputs[i].owner;
    ClientOptions o{at,
                    fixture,
                    std::make_shared<const KeyMaterial>(keys.ForUser(k)),
                    inputs[i],
                    plan.Resolve(k, drop_seed),
                    byte_packing,
                    timeouts};
    threads.emplace_back([&out, i, o = std::move(o)] { out.clients[i] = RunClient(o); });
  }
  out.server = server.Run();
  for (auto& t : threads) t.join();
  return out;
}

BenchConfig BenchConfig::FromJson(const json& j) {
  BenchConfig c;
  c.users = j.value("K", c.users);
  c.min_survivors = j.value("U", c.min_survivors);
  c.group_size = j.value("S", c.group_size);
  c.modulus = j.value("q", c.modulus);
  c.repeats = j.value("repeats", c.repeats);
  c.seed = j.value("seed", c.seed);
  c.drop_plan = j.value("drop_plan", c.drop_plan);
  c.byte_packing = j.value("byte_packing", c.byte_packing);
  if (j.contains("timeouts")) c.timeouts = TimeoutsFromJson(j.at("timeouts"));
  if (j.contains("L")) c.lengths = j.at("L").get<std::vector<int64_t>>();
  if (j.contains("sizes_kb")) {
    const size_t width = c.byte_packing && c.modulus <= 251 ? 1 : 4;
    for (int64_t kb : j.at("sizes_kb").get<std::vector<int64_t>>()) {
      c.lengths.push_back(
          LengthForBytes(c.users, c.min_survivors, c.group_size, kb * 1024, width));
    }
  }
  return c;
}

int64_t LengthForBytes(int users, int min_survivors, int group_size, int64_t bytes,
                       size_t symbol_width) {
  const int64_t unit = SchemeParams::MinInputLength(users, min_survivors, group_size);
  const int64_t symbols = (bytes + symbol_width - 1) / symbol_width;
  return (symbols + unit - 1) / unit * unit;
}

std::vector<BenchRow> RunBench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  const DropPlan plan = DropPlan::Parse(cfg.drop_plan);
  for (int64_t length : cfg.lengths) {
    const SchemeParams p = SchemeParams::Create(cfg.users, cfg.min_survivors,
                                                cfg.group_size, cfg.modulus, length);
    ValidatedScheme vs = BuildValidated(p, cfg.seed, 64);
    auto fixture = std::make_shared<const Fixture>(
        Fixture{std::move(vs.family), std::move(vs.ums), vs.attempts});
    BenchRow mean{cfg.users, cfg.min_survivors, cfg.group_size, length, cfg.modulus, -1};
    mean.ok = true;
    for (int r = 0; r < cfg.repeats; ++r) {
      const uint64_t draw = DeriveSeed(cfg.seed, 1000 + r);
      const KeyMaterial keys = KeyMaterial::Generate(p, draw);
      const LoopbackResult res = RunLoopback(fixture, keys, RandomInputs(p, draw), plan,
                                             draw, cfg.timeouts, cfg.byte_packing);
      BenchRow row{cfg.users, cfg.min_survivors, cfg.group_size, length, cfg.modulus, r,
                   res.server.round1_ms, res.server.round2_ms, res.server.decode_ms,
                   res.server.total_ms, 0, 0, res.server.ok()};
      if (!res.server.bytes_r1.empty()) row.bytes_r1 = res.server.bytes_r1.begin()->second;
      if (!res.server.bytes_r2.empty()) row.bytes_r2 = res.server.bytes_r2.begin()->second;
      rows.push_back(row);
      mean.round1_ms += row.round1_ms / cfg.repeats;
      mean.round2_ms += row.round2_ms / cfg.repeats;
      mean.decode_ms += row.decode_ms / cfg.repeats;
      mean.total_ms += row.total_ms / cfg.repeats;
      mean.bytes_r1 = row.bytes_r1;
      mean.bytes_r2 = row.bytes_r2;
      mean.ok = mean.ok && row.ok;
    }
    rows.push_back(mean);
  }
  return rows;
}

std::string BenchCsvHeader() {
  return "K,U,S,L,q,repeat,round1_ms,round2_ms,decode_ms,total_ms,bytes_r1,bytes_r2";
}

std::string BenchCsvRow(const BenchRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%d,%d,%lld,%u,%s,%.3f,%.3f,%.3f,%.3f,%zu,%zu",
                r.users, r.min_survivors, r.group_size, static_cast<long long>(r.length),
                r.modulus, r.repeat < 0 ? "mean" : std::to_string(r.repeat).c_str(),
                r.round1_ms, r.round2_ms, r.decode_ms, r.total_ms, r.bytes_r1, r.bytes_r2);
  return buf;
}

}  // namespace gsa::net
