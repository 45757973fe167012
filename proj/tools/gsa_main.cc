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

// gsa: command-line entry point.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "gsa/error.h"
#include "gsa/fixture_io.h"
#include "gsa/net/bench.h"
#include "gsa/net/client.h"
#include "gsa/net/server.h"
#include "gsa/net/session.h"
#include "gsa/rng.h"
#include "gsa/transcript_io.h"
#include "gsa/verify.h"
#include "gsa/witness.h"

namespace gsa {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

// Raised for bad flag combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Print(bool as_json, const json& j, const std::function<void()>& human) {
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    human();
  }
}

Fixture LoadFixture(const std::string& path) {
  return FixtureFromJson(LoadJson(path));
}

std::string FormatMatrix(const FieldMatrix& m) {
  std::string out;
  for (size_t r = 0; r < m.rows(); ++r) {
    out += "  ";
    for (size_t c = 0; c < m.cols(); ++c) out += m(r, c) ? "1 " : ". ";
    out += "\n";
  }
  return out;
}

// ---- rates ----------------------------------------------------------------

struct RatesArgs {
  int users = 5, survivors = 2, group = 3;
  bool json = false;
};

int CmdRates(const RatesArgs& a) {
  if (a.users < 2) throw UsageError("K must be at least 2");
  json j{{"K", a.users}, {"U", a.survivors}, {"S", a.group}};
  try {
    const RatePair r = AchievedRates(a.users, a.survivors, a.group);
    const Rational overhead = RoundOneOverhead(a.users, a.survivors, a.group);
    const bool collapsed = a.group > a.users - a.survivors;
    j["feasible"] = true;
    j["R1"] = r.round1.ToString();
    j["R2"] = r.round2.ToString();
    j["round1_overhead"] = overhead.ToString();
    j["unconstrained_keys"] = {{"R1", "1"}, {"R2", Rational::Of(1, a.survivors).ToString()}};
    j["groups_exceed_dropouts"] = collapsed;
    Print(a.json, j, [&] {
      std::printf("K=%d U=%d S=%d\n", a.users, a.survivors, a.group);
      std::printf("  %-34s R1 = %-8s R2 = %s\n", "groupwise keys:", r.round1.ToString().c_str(),
                  r.round2.ToString().c_str());
      std::printf("  %-34s R1 = %-8s R2 = %s\n", "unconstrained keys:", "1",
                  Rational::Of(1, a.survivors).ToString().c_str());
      std::printf("  round-1 overhead: %s (%.4f)\n", overhead.ToString().c_str(),
                  overhead.ToDouble());
      if (collapsed) std::printf("  S > K-U: rates equal the unconstrained-key optimum\n");
    });
    return 0;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasibleS) throw;
    j["feasible"] = false;
    j["reason"] = "infeasible: with S = 1 no key is shared, so secure aggregation is impossible";
    Print(a.json, j, [&] {
      std::printf("K=%d U=%d S=%d: infeasible (S = 1 gives no shared keys)\n", a.users,
                  a.survivors, a.group);
    });
    return 0;
  }
}

// ---- fixture --------------------------------------------------------------

struct FixtureArgs {
  int users = 5, survivors = 2, group = 3;
  uint64_t modulus = kDefaultModulus;
  int64_t length = 0;
  bool pad = false;
  uint64_t seed = 1;
  int max_attempts = 64;
  std::string out;
  bool json = false;
};

int CmdFixture(const FixtureArgs& a) {
  const int64_t unit = SchemeParams::MinInputLength(a.users, a.survivors, a.group);
  int64_t length = a.length == 0 ? unit : a.length;
  int64_t padding = 0;
  if (length % unit != 0) {
    if (!a.pad) {
      throw UsageError("L = " + std::to_string(length) + " is not a multiple of " +
                       std::to_string(unit) + "; pass --pad to round up");
    }
    padding = (length + unit - 1) / unit * unit - length;
    length += padding;
  }
  const SchemeParams p = SchemeParams::Create(a.users, a.survivors, a.group,
                                              static_cast<Residue>(a.modulus), length);
  ValidatedScheme vs = BuildValidated(p, a.seed, a.max_attempts);
  const Fixture fx{std::move(vs.family), std::move(vs.ums), vs.attempts};
  const json doc = FixtureToJson(fx);
  if (!a.out.empty()) SaveJson(a.out, doc);
  json j{{"params", ParamsToJson(p)},
         {"seed", a.seed},
         {"attempts", fx.attempts},
         {"padding", padding},
         {"checksum", net::ChecksumHex(FixtureChecksum(fx))},
         {"out", a.out}};
  if (a.out.empty()) j["fixture"] = doc;
  Print(a.json, j, [&] {
    std::printf("fixture %s seed=%llu attempts=%d checksum=%s\n", p.ToString().c_str(),
                static_cast<unsigned long long>(a.seed), fx.attempts,
                net::ChecksumHex(FixtureChecksum(fx)).c_str());
    if (padding > 0) {
      std::printf("  L padded by %lld zero symbol(s); effective rates grow by a factor %.6f\n",
                  static_cast<long long>(padding),
                  static_cast<double>(length) / (length - padding));
    }
    if (a.out.empty()) {
      std::cout << doc.dump() << "\n";
    } else {
      std::printf("  written to %s\n", a.out.c_str());
    }
  });
  return 0;
}

// ---- keygen ---------------------------------------------------------------

struct KeygenArgs {
  std::string fixture;
  uint64_t seed = 1;
  std::string keys_dir;
  std::string inputs_dir;
  uint64_t input_seed = 1;
  bool json = false;
};

int CmdKeygen(const KeygenArgs& a) {
  const Fixture fx = LoadFixture(a.fixture);
  const SchemeParams& p = fx.family.params();
  const uint64_t checksum = FixtureChecksum(fx);
  const KeyMaterial keys = KeyMaterial::Generate(p, a.seed);
  fs::create_directories(a.keys_dir);
  for (int k = 1; k <= p.users(); ++k) {
    SaveJson(net::KeyFilePath(a.keys_dir, k), net::KeyFileToJson(keys, k, checksum));
  }
  json j{{"keys_dir", a.keys_dir}, {"seed", a.seed}, {"checksum", net::ChecksumHex(checksum)}};
  if (!a.inputs_dir.empty()) {
    fs::create_directories(a.inputs_dir);
    const std::vector<InputVector> inputs = RandomInputs(p, a.input_seed);
    for (const InputVector& in : inputs) {
      SaveJson(net::InputFilePath(a.inputs_dir, in.owner), net::InputFileToJson(in));
    }
    j["inputs_dir"] = a.inputs_dir;
    j["input_seed"] = a.input_seed;
    j["sum_all"] = EncodeSymbolsHex(DirectSum(p, inputs, Range(1, p.users())));
  }
  Print(a.json, j, [&] {
    std::printf("keys for %d users in %s (seed=%llu, fixture %s)\n", p.users(),
                a.keys_dir.c_str(), static_cast<unsigned long long>(a.seed),
                net::ChecksumHex(checksum).c_str());
    if (!a.inputs_dir.empty()) {
      std::printf("inputs in %s (seed=%llu)\n", a.inputs_dir.c_str(),
                  static_cast<unsigned long long>(a.input_seed));
    }
  });
  return 0;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string fixture;
  std::string u1, u2;
  uint64_t seed = 1;
  int64_t data_length = 0;
  std::string dump;
  bool json = false;
};

int CmdSimulate(const SimulateArgs& a) {
  const Subset u1 = ParseSubset(a.u1);
  const Subset u2 = ParseSubset(a.u2);
  if (!IsSubsetOf(u2, u1)) {
    throw UsageError("U2 {" + SubsetKey(u2) + "} is not a subset of U1 {" + SubsetKey(u1) + "}");
  }
  const Fixture fx = LoadFixture(a.fixture);
  const SchemeParams& p = fx.family.params();
  try {
    ValidateSurvivorSets(p, u1, u2);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const int64_t data = a.data_length == 0 ? p.input_length() : a.data_length;
  if (data < 1 || data > p.input_length()) {
    throw UsageError("--data-length must lie in [1, L]");
  }
  const KeyMaterial keys = KeyMaterial::Generate(p, DeriveSeed(a.seed, 1));
  std::vector<InputVector> inputs = RandomInputs(p, DeriveSeed(a.seed, 2));
  for (InputVector& in : inputs) std::fill(in.symbols.begin() + data, in.symbols.end(), 0);
  Transcript t = Simulate(fx.family, fx.ums, keys, inputs, u1, u2);
  t.key_seed = DeriveSeed(a.seed, 1);
  t.input_seed = DeriveSeed(a.seed, 2);
  std::vector<Residue> expect = DirectSum(p, inputs, u1);
  const bool ok = t.decoded && *t.decoded == expect;
  if (!a.dump.empty()) SaveJson(a.dump, TranscriptToJson(t));
  json j{{"params", ParamsToJson(p)},
         {"seed", a.seed},
         {"U1", u1},
         {"U2", u2},
         {"data_length", data},
         {"padding", p.input_length() - data},
         {"round1_symbols_per_user", p.round1_symbols()},
         {"round2_symbols_per_user", p.round2_symbols()},
         {"decoded_matches_direct_sum", ok},
         {"failure", t.failure}};
  if (t.decoded) {
    j["decoded"] = EncodeSymbolsHex(std::span<const Residue>(*t.decoded).first(data));
  }
  Print(a.json, j, [&] {
    std::printf("simulate %s seed=%llu U1={%s} U2={%s}\n", p.ToString().c_str(),
                static_cast<unsigned long long>(a.seed), SubsetKey(u1).c_str(),
                SubsetKey(u2).c_str());
    std::printf("  symbols per user: round 1 = %lld, round 2 = %lld\n",
                static_cast<long long>(p.round1_symbols()),
                static_cast<long long>(p.round2_symbols()));
    if (data < p.input_length()) {
      std::printf("  %lld padding symbol(s) stripped from the result\n",
                  static_cast<long long>(p.input_length() - data));
    }
    std::printf("  decode: %s\n", ok ? "PASS (equals the direct sum over U1)"
                                     : ("FAIL " + t.failure).c_str());
    if (!a.dump.empty()) std::printf("  transcript written to %s\n", a.dump.c_str());
  });
  return ok ? 0 : kExitFail;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string fixture;
  std::string mode = "all";
  int trials = 3;
  uint64_t seed = 1;
  std::string sabotage = "none";
  int sabotage_user = 1;
  int64_t sabotage_piece = 0;
  bool force = false;
  std::string failures_dir;
  bool json = false;
};

constexpr size_t kDecodeBudget = 20000;          // pattern-trials
constexpr size_t kLeakBudget = size_t{1} << 26;  // matrix entries

int CmdVerify(const VerifyArgs& a) {
  const bool do_decode = a.mode == "decode" || a.mode == "all";
  const bool do_leak = a.mode == "leak" || a.mode == "all";
  const bool do_mi = a.mode == "mi" || a.mode == "all";
  if (!do_decode && !do_leak && !do_mi) {
    throw UsageError("--mode must be decode, leak, mi or all");
  }
  const Sabotage sabotage{ParseSabotageMode(a.sabotage), a.sabotage_user, a.sabotage_piece};
  const Fixture fx = LoadFixture(a.fixture);
  const SchemeParams& p = fx.family.params();
  json j{{"params", ParamsToJson(p)}, {"seed", a.seed}, {"mode", a.mode},
         {"sabotage", a.sabotage}};
  bool pass = true;
  std::vector<std::string> lines;

  if (do_decode) {
    const auto patterns = DropoutPatterns(p);
    if (patterns.size() * a.trials > kDecodeBudget && !a.force) {
      throw UsageError(std::to_string(patterns.size() * a.trials) +
                       " decodes exceed the budget; pass --force");
    }
    const SweepReport rep = ExhaustiveDropoutSweep(fx.family, fx.ums, a.trials, a.seed);
    json fails = json::array();
    for (size_t i = 0; i < rep.failures.size(); ++i) {
      const SweepFailure& f = rep.failures[i];
      json entry{{"U1", f.u1}, {"U2", f.u2}, {"trial", f.trial}, {"reason", f.reason}};
      if (!a.failures_dir.empty()) {
        fs::create_directories(a.failures_dir);
        const std::string path =
            (fs::path(a.failures_dir) / ("failure_" + std::to_string(i) + ".json")).string();
        SaveJson(path, f.transcript);
        entry["transcript"] = path;
      }
      fails.push_back(entry);
    }
    j["decode"] = {{"patterns", rep.patterns}, {"decodes", rep.decodes},
                   {"failures", fails}, {"verdict", rep.ok() ? "PASS" : "FAIL"}};
    pass = pass && rep.ok();
    char buf[160];
    std::snprintf(buf, sizeof buf, "decode   %-5s %zu patterns x %d trials, %zu failure(s)",
                  rep.ok() ? "PASS" : "FAIL", rep.patterns, a.trials, rep.failures.size());
    lines.push_back(buf);
    for (const auto& f : rep.failures) {
      lines.push_back("         U1={" + SubsetKey(f.u1) + "} U2={" + SubsetKey(f.u2) +
                      "}: " + f.reason);
    }
  }

  if (do_leak) {
    const size_t rows = p.users() * p.round1_symbols() + p.users() * p.round2_symbols();
    const size_t cols = p.users() * p.input_length() + p.num_groups() * p.key_len();
    if (rows * cols > kLeakBudget && !a.force) {
      throw UsageError("rank accounting on " + std::to_string(rows) + "x" +
                       std::to_string(cols) + " systems exceeds the budget; pass --force");
    }
    json reports = json::array();
    bool leak_ok = true;
    for (const Subset& u1 : SubsetsAtLeast(p.users(), p.min_survivors())) {
      const LeakageReport r =
          LeakageRank(p, BuildViewSystem(fx.family, fx.ums, u1, sabotage, 10, a.seed));
      leak_ok = leak_ok && r.pass();
      reports.push_back({{"U1", u1}, {"h_view", r.h_view},
                         {"h_view_given_inputs", r.h_view_given_inputs},
                         {"info_view", r.info_view},
                         {"info_view_given_sum", r.info_view_given_sum},
                         {"verdict", r.pass() ? "PASS" : "FAIL"}});
      char buf[160];
      std::snprintf(buf, sizeof buf, "leak     %-5s U1={%s} I(W;view)=%lld I(W;view|sum)=%lld",
                    r.pass() ? "PASS" : "FAIL", SubsetKey(u1).c_str(),
                    static_cast<long long>(r.info_view),
                    static_cast<long long>(r.info_view_given_sum));
      lines.push_back(buf);
    }
    j["leak"] = {{"reports", reports}, {"verdict", leak_ok ? "PASS" : "FAIL"}};
    pass = pass && leak_ok;
  }

  if (do_mi) {
    if (EnumerationStates(p) > kMaxEnumerationStates) {
      if (a.mode == "mi") {
        throw Error(ErrorCode::kTooLargeToEnumerate,
                    p.ToString() + " has more than 2^26 enumeration states");
      }
      j["mi"] = {{"verdict", "SKIP"}, {"reason", "more than 2^26 enumeration states"}};
      lines.push_back("mi       SKIP  more than 2^26 enumeration states");
    } else {
      json reports = json::array();
      bool mi_ok = true;
      for (const Subset& u1 : SubsetsAtLeast(p.users(), p.min_survivors())) {
        const MiResult mi = BruteForceMi(fx.family, fx.ums, u1, sabotage);
        const LeakageReport r =
            LeakageRank(p, BuildViewSystem(fx.family, fx.ums, u1, sabotage, 10, a.seed));
        const bool agree = mi.info == Rational::Of(r.info_view_given_sum, 1);
        const bool ok = agree && mi.info.num == 0;
        mi_ok = mi_ok && ok;
        reports.push_back({{"U1", u1}, {"mi", mi.info.ToString()}, {"shannon", mi.shannon},
                           {"rank", r.info_view_given_sum}, {"agree", agree},
                           {"verdict", ok ? "PASS" : "FAIL"}});
        char buf[160];
        std::snprintf(buf, sizeof buf, "mi       %-5s U1={%s} enumerated=%s rank=%lld",
                      ok ? "PASS" : "FAIL", SubsetKey(u1).c_str(), mi.info.ToString().c_str(),
                      static_cast<long long>(r.info_view_given_sum));
        lines.push_back(buf);
      }
      j["mi"] = {{"reports", reports}, {"verdict", mi_ok ? "PASS" : "FAIL"}};
      pass = pass && mi_ok;
    }
  }

  j["verdict"] = pass ? "PASS" : "FAIL";
  Print(a.json, j, [&] {
    std::printf("verify %s seed=%llu mode=%s sabotage=%s\n", p.ToString().c_str(),
                static_cast<unsigned long long>(a.seed), a.mode.c_str(), a.sabotage.c_str());
    for (const auto& l : lines) std::printf("  %s\n", l.c_str());
    std::printf("  overall: %s\n", pass ? "PASS" : "FAIL");
  });
  return pass ? 0 : kExitFail;
}

// ---- witness --------------------------------------------------------------

struct WitnessArgs {
  int users = 5, survivors = 2, group = 3;
  uint64_t modulus = kDefaultModulus;
  std::string u2;
  int pivot = 0;
  bool all = false;
  bool json = false;
};

int CmdWitness(const WitnessArgs& a) {
  const SchemeParams p = SchemeParams::Create(
      a.users, a.survivors, a.group, static_cast<Residue>(a.modulus),
      SchemeParams::MinInputLength(a.users, a.survivors, a.group));
  std::vector<std::pair<Subset, int>> cases;
  if (a.all) {
    for (const Subset& u2 : Combinations(p.users(), p.min_survivors())) {
      for (int u = 1; u <= p.users(); ++u) {
        if (!Contains(u2, u)) cases.emplace_back(u2, u);
      }
    }
  } else {
    if (a.u2.empty() || a.pivot == 0) throw UsageError("give --u2 and --pivot, or --all");
    cases.emplace_back(ParseSubset(a.u2), a.pivot);
  }
  json out = json::array();
  bool pass = true;
  for (const auto& [u2, u] : cases) {
    const Witness w = BuildWitness(p, u2, u);
    const bool perm = IsRowPermutationOfIdentity(w.decodability);
    bool urns_full = true;
    json urns = json::array();
    for (const Urn& urn : w.urns) {
      urns_full = urns_full && urn.total() == p.min_survivors();
      urns.push_back({{"group", urn.group}, {"balls", urn.balls}});
    }
    const bool ok = perm && urns_full;
    pass = pass && ok;
    out.push_back({{"U2", u2}, {"pivot", u}, {"permutation_of_identity", perm},
                   {"urns_full", urns_full}, {"urns", urns},
                   {"verdict", ok ? "PASS" : "FAIL"}});
    if (!a.json) {
      std::printf("witness %s U2={%s} u=%d: %s\n", p.ToString().c_str(), SubsetKey(u2).c_str(),
                  u, ok ? "PASS" : "FAIL");
      std::printf("  decodability matrix is %sa row permutation of the identity\n",
                  perm ? "" : "NOT ");
      if (!a.all) {
        std::cout << FormatMatrix(w.decodability);
        for (const Urn& urn : w.urns) {
          std::string balls;
          for (size_t c = 0; c < urn.balls.size(); ++c) {
            balls += " " + std::to_string(u2[c]) + ":" + std::to_string(urn.balls[c]);
          }
          std::printf("  urn {%s} balls%s (total %d)\n", SubsetKey(urn.group).c_str(),
                      balls.c_str(), urn.total());
        }
      }
    }
  }
  if (a.json) std::cout << json{{"cases", out}, {"verdict", pass ? "PASS" : "FAIL"}}.dump(2) << "\n";
  return pass ? 0 : kExitFail;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string config;
  std::string csv;
  int repeats = 0;
  bool json = false;
};

int CmdBench(const BenchArgs& a) {
  net::BenchConfig cfg = net::BenchConfig::FromJson(LoadJson(a.config));
  if (a.repeats > 0) cfg.repeats = a.repeats;
  if (cfg.lengths.empty()) throw UsageError("bench config lists no lengths (L or sizes_kb)");
  const std::vector<net::BenchRow> rows = net::RunBench(cfg);
  std::string csv = net::BenchCsvHeader() + "\n";
  for (const auto& r : rows) csv += net::BenchCsvRow(r) + "\n";
  if (!a.csv.empty()) {
    std::ofstream(a.csv) << csv;
  }
  bool ok = true;
  json j = json::array();
  for (const auto& r : rows) {
    ok = ok && r.ok;
    j.push_back({{"K", r.users}, {"U", r.min_survivors}, {"S", r.group_size}, {"L", r.length},
                 {"q", r.modulus}, {"repeat", r.repeat < 0 ? json("mean") : json(r.repeat)},
                 {"round1_ms", r.round1_ms}, {"round2_ms", r.round2_ms},
                 {"decode_ms", r.decode_ms}, {"total_ms", r.total_ms},
                 {"bytes_r1", r.bytes_r1}, {"bytes_r2", r.bytes_r2}, {"ok", r.ok}});
  }
  Print(a.json, json{{"seed", cfg.seed}, {"rows", j}}, [&] {
    std::printf("bench seed=%llu\n", static_cast<unsigned long long>(cfg.seed));
    std::cout << csv;
  });
  return ok ? 0 : kExitFail;
}

// ---- serve / client -------------------------------------------------------

struct NetArgs {
  std::string config;
  std::string listen;
  std::string fixture;
  std::string keys;
  std::string input;
  std::string drop_plan;
  int timeout_ms = 0;
  std::string out;
  std::string dump;
  int user = 0;
  bool json = false;
};

net::SessionConfig SessionFrom(const NetArgs& a) {
  net::SessionConfig cfg;
  if (!a.config.empty()) cfg = net::SessionConfig::Load(a.config);
  if (!a.listen.empty()) cfg.listen = net::Endpoint::Parse(a.listen);
  if (!a.fixture.empty()) cfg.fixture_path = a.fixture;
  if (!a.drop_plan.empty()) cfg.drop_plan = net::DropPlan::Parse(a.drop_plan);
  if (a.timeout_ms > 0) {
    cfg.timeouts.round1_ms = cfg.timeouts.round2_ms = a.timeout_ms;
  }
  if (cfg.fixture_path.empty()) throw UsageError("no fixture (use --fixture or a config)");
  return cfg;
}

int CmdServe(const NetArgs& a) {
  const net::SessionConfig cfg = SessionFrom(a);
  auto fx = std::make_shared<const Fixture>(LoadFixture(cfg.fixture_path));
  net::Server server(net::ServerOptions{cfg.listen, fx, cfg.timeouts, cfg.byte_packing});
  std::fprintf(stderr, "listening on %s:%u\n", cfg.listen.host.c_str(), server.port());
  const net::AggregationRecord rec = server.Run();
  json j = rec.ToJson();
  j["params"] = ParamsToJson(fx->family.params());
  if (!a.out.empty()) SaveJson(a.out, j);
  if (!a.dump.empty() && rec.transcript) SaveJson(a.dump, TranscriptToJson(*rec.transcript));
  Print(a.json, j, [&] {
    std::printf("serve %s U1={%s} U2={%s}: %s\n", fx->family.params().ToString().c_str(),
                SubsetKey(rec.u1).c_str(), SubsetKey(rec.u2).c_str(),
                rec.ok() ? "RESULT sent" : rec.error.c_str());
    std::printf("  round1 %.2f ms, round2 %.2f ms, decode %.2f ms, total %.2f ms\n",
                rec.round1_ms, rec.round2_ms, rec.decode_ms, rec.total_ms);
    for (const auto& v : rec.violations) std::printf("  violation: %s\n", v.c_str());
  });
  return rec.ok() ? 0 : kExitFail;
}

int CmdClient(const NetArgs& a) {
  const net::SessionConfig cfg = SessionFrom(a);
  if (a.user < 1) throw UsageError("--user is required");
  auto fx = std::make_shared<const Fixture>(LoadFixture(cfg.fixture_path));
  const SchemeParams& p = fx->family.params();
  const std::string key_path = !a.keys.empty() ? a.keys : net::KeyFilePath(cfg.keys_dir, a.user);
  const std::string input_path =
      !a.input.empty() ? a.input : net::InputFilePath(cfg.inputs_dir, a.user);
  auto keys = std::make_shared<const KeyMaterial>(
      net::KeyFileFromJson(LoadJson(key_path), p, a.user, FixtureChecksum(*fx)));
  InputVector input = net::InputFileFromJson(LoadJson(input_path), p);
  if (input.owner != a.user) throw UsageError("input file belongs to another user");
  const net::DropAction drop = cfg.drop_plan.Resolve(a.user, cfg.drop_seed);
  const net::ClientRecord rec = net::RunClient(net::ClientOptions{
      cfg.listen, fx, keys, std::move(input), drop, cfg.byte_packing, cfg.timeouts});
  const json j = rec.ToJson();
  if (!a.out.empty()) SaveJson(a.out, j);
  Print(a.json, j, [&] {
    std::printf("client %d drop=%s bytes r1=%zu r2=%zu: %s\n", a.user, net::DropActionName(drop),
                rec.bytes_r1, rec.bytes_r2,
                rec.error_code ? rec.error.c_str() : (rec.result ? "RESULT received" : "dropped"));
  });
  return rec.error_code ? kExitFail : 0;
}

// ---- replay ---------------------------------------------------------------

struct ReplayArgs {
  std::string fixture;
  std::string transcript;
  bool json = false;
};

int CmdReplay(const ReplayArgs& a) {
  const Fixture fx = LoadFixture(a.fixture);
  const Transcript t = TranscriptFromJson(LoadJson(a.transcript));
  if (!(t.params == fx.family.params())) {
    throw UsageError("transcript parameters differ from the fixture");
  }
  json j{{"U1", t.u1}, {"U2", t.u2}};
  bool ok = false;
  std::string detail;
  try {
    const std::vector<Residue> sum = DecodeTranscript(fx.family, fx.ums, t);
    j["decoded"] = EncodeSymbolsHex(sum);
    if (t.decoded) {
      ok = sum == *t.decoded;
      detail = ok ? "matches the recorded sum" : "differs from the recorded sum";
    } else {
      detail = "recorded run had no result: " + t.failure;
    }
  } catch (const Error& e) {
    detail = e.what();
  }
  j["verdict"] = ok ? "PASS" : "FAIL";
  j["detail"] = detail;
  Print(a.json, j, [&] {
    std::printf("replay U1={%s} U2={%s}: %s (%s)\n", SubsetKey(t.u1).c_str(),
                SubsetKey(t.u2).c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  });
  return ok ? 0 : kExitFail;
}

}  // namespace
}  // namespace gsa

int main(int argc, char** argv) {
  using namespace gsa;
  CLI::App app{"Two-round secure aggregation with groupwise keys"};
  app.require_subcommand(1);

  RatesArgs rates;
  auto* c_rates = app.add_subcommand("rates", "Optimal communication rates for (K, U, S)");
  c_rates->add_option("-K,--users", rates.users)->required();
  c_rates->add_option("-U,--survivors", rates.survivors)->required();
  c_rates->add_option("-S,--group-size", rates.group)->required();
  c_rates->add_flag("--json", rates.json);

  FixtureArgs fix;
  auto* c_fix = app.add_subcommand("fixture", "Build and validate coefficients and user matrices");
  c_fix->add_option("-K,--users", fix.users)->required();
  c_fix->add_option("-U,--survivors", fix.survivors)->required();
  c_fix->add_option("-S,--group-size", fix.group)->required();
  c_fix->add_option("-q,--modulus", fix.modulus);
  c_fix->add_option("-L,--length", fix.length, "input length (default: smallest admissible)");
  c_fix->add_flag("--pad", fix.pad, "round L up to the next admissible length");
  c_fix->add_option("--seed", fix.seed);
  c_fix->add_option("--max-attempts", fix.max_attempts);
  c_fix->add_option("-o,--out", fix.out);
  c_fix->add_flag("--json", fix.json);

  KeygenArgs kg;
  auto* c_kg = app.add_subcommand("keygen", "Write per-user key files (and optional inputs)");
  c_kg->add_option("--fixture", kg.fixture)->required();
  c_kg->add_option("--seed", kg.seed);
  c_kg->add_option("--keys-dir", kg.keys_dir)->required();
  c_kg->add_option("--inputs-dir", kg.inputs_dir);
  c_kg->add_option("--input-seed", kg.input_seed);
  c_kg->add_flag("--json", kg.json);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Run both rounds in-process");
  c_sim->add_option("--fixture", sim.fixture)->required();
  c_sim->add_option("--u1", sim.u1, "first-round survivors, e.g. 1,2,3,4")->required();
  c_sim->add_option("--u2", sim.u2, "second-round survivors")->required();
  c_sim->add_option("--seed", sim.seed);
  c_sim->add_option("--data-length", sim.data_length, "true input length; the rest is padding");
  c_sim->add_option("--dump", sim.dump, "write the transcript here");
  c_sim->add_flag("--json", sim.json);

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Decodability sweep, rank leakage, MI oracle");
  c_ver->add_option("--fixture", ver.fixture)->required();
  c_ver->add_option("--mode", ver.mode)->check(CLI::IsMember({"decode", "leak", "mi", "all"}));
  c_ver->add_option("--trials", ver.trials);
  c_ver->add_option("--seed", ver.seed);
  c_ver->add_option("--sabotage", ver.sabotage)
      ->check(CLI::IsMember({"none", "unmasked", "zero-keys"}));
  c_ver->add_option("--sabotage-user", ver.sabotage_user);
  c_ver->add_option("--sabotage-piece", ver.sabotage_piece, "0-based");
  c_ver->add_flag("--force", ver.force, "allow runs over the time budget");
  c_ver->add_option("--failures-dir", ver.failures_dir, "dump failing transcripts here");
  c_ver->add_flag("--json", ver.json);

  WitnessArgs wit;
  auto* c_wit = app.add_subcommand("witness", "Deterministic decodability witness");
  c_wit->add_option("-K,--users", wit.users)->required();
  c_wit->add_option("-U,--survivors", wit.survivors)->required();
  c_wit->add_option("-S,--group-size", wit.group)->required();
  c_wit->add_option("-q,--modulus", wit.modulus);
  c_wit->add_option("--u2", wit.u2);
  c_wit->add_option("--pivot", wit.pivot, "user outside U2");
  c_wit->add_flag("--all", wit.all, "every (U2, pivot) pair");
  c_wit->add_flag("--json", wit.json);

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Loopback timing table");
  c_bench->add_option("--config", bench.config)->required();
  c_bench->add_option("--csv", bench.csv);
  c_bench->add_option("--repeats", bench.repeats);
  c_bench->add_flag("--json", bench.json);

  NetArgs srv;
  auto* c_srv = app.add_subcommand("serve", "Run the aggregation server for one epoch");
  NetArgs cli;
  auto* c_cli = app.add_subcommand("client", "Run one user");
  for (auto [cmd, args] : {std::pair{c_srv, &srv}, std::pair{c_cli, &cli}}) {
    cmd->add_option("--config", args->config);
    cmd->add_option("--listen", args->listen, "host:port");
    cmd->add_option("--fixture", args->fixture);
    cmd->add_option("--drop-plan", args->drop_plan);
    cmd->add_option("--timeout-ms", args->timeout_ms);
    cmd->add_option("--out", args->out, "record.json");
    cmd->add_flag("--json", args->json);
  }
  c_srv->add_option("--dump", srv.dump, "write the live transcript here");
  c_cli->add_option("--user", cli.user)->required();
  c_cli->add_option("--keys", cli.keys, "key file");
  c_cli->add_option("--input", cli.input, "input file");

  ReplayArgs rep;
  auto* c_rep = app.add_subcommand("replay", "Decode a recorded transcript again");
  c_rep->add_option("--fixture", rep.fixture)->required();
  c_rep->add_option("--transcript", rep.transcript)->required();
  c_rep->add_flag("--json", rep.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version come through here with a zero code.
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*c_rates) return CmdRates(rates);
    if (*c_fix) return CmdFixture(fix);
    if (*c_kg) return CmdKeygen(kg);
    if (*c_sim) return CmdSimulate(sim);
    if (*c_ver) return CmdVerify(ver);
    if (*c_wit) return CmdWitness(wit);
    if (*c_bench) return CmdBench(bench);
    if (*c_srv) return CmdServe(srv);
    if (*c_cli) return CmdClient(cli);
    if (*c_rep) return CmdReplay(rep);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "gsa: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "gsa: %s\n", e.what());
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gsa: %s\n", e.what());
    return kExitError;
  }
  return kExitUsage;
}
