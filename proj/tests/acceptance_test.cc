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

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "gsa/net/bench.h"
#include "gsa/verify.h"
#include "gsa/witness.h"
#include "test_util.h"

namespace gsa {
namespace {

using Seconds = std::chrono::duration<double>;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = Seconds(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(limit_s) + " s budget)";
  }
  if (!o.pass) ++failures;
  std::printf("[AC%d] %s %s [%.2f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
  std::fflush(stdout);
}

Outcome DerivedVectors() {
  const SchemeParams p = testing::ExampleParams();
  const CoefficientFamily fam = testing::ExampleFamily(p);
  const std::vector<Subset> groups = {{2, 3, 4}, {2, 3, 5}, {2, 4, 5}, {3, 4, 5}};
  for (size_t i = 0; i < groups.size(); ++i) {
    std::vector<Residue> expect;
    for (int64_t v : testing::kExampleDerived[i]) expect.push_back(p.field().FromSigned(v));
    if (fam.Vector(groups[i]) != expect) {
      return {false, "vector of {" + SubsetKey(groups[i]) + "} differs"};
    }
  }
  return {true, "all four derived vectors reproduced"};
}

Outcome ExampleRanks() {
  const SchemeParams p = testing::ExampleParams();
  const CoefficientFamily fam = testing::ExampleFamily(p);
  const UserMatrixSet ums = testing::ExampleUserMatrices(p);
  for (size_t r : SecurityRanks(fam)) {
    if (r != 6) return {false, "security rank " + std::to_string(r)};
  }
  for (size_t r : AlignmentRanks(fam)) {
    if (r != 3) return {false, "alignment rank " + std::to_string(r)};
  }
  for (const Subset& u2 : Combinations(5, 2)) {
    const size_t r = Rank(DecodabilityMatrix(p, ums, u2));
    if (r != 12) return {false, "U2={" + SubsetKey(u2) + "} rank " + std::to_string(r)};
  }
  return {true, "security 6/6, alignment 3, 10 decodability matrices of rank 12"};
}

Outcome Rates() {
  const int shapes[4][3] = {{5, 2, 3}, {4, 2, 2}, {6, 3, 2}, {6, 5, 3}};
  std::ostringstream detail;
  for (const auto& s : shapes) {
    const SchemeParams p = SchemeParams::Create(s[0], s[1], s[2], kDefaultModulus,
                                                4 * SchemeParams::MinInputLength(s[0], s[1], s[2]));
    const ValidatedScheme v = BuildValidated(p, 1, 50);
    const Transcript t = Simulate(v.family, v.ums, KeyMaterial::Generate(p, 2),
                                  RandomInputs(p, 3), Range(1, s[0]), Range(1, s[1]));
    if (!t.decoded) return {false, "decode failed: " + t.failure};
    const RatePair want = p.rates();
    const int64_t L = p.input_length();
    for (const auto& m : t.round1) {
      if (Rational::Of(static_cast<int64_t>(m.symbols.size()), L) != want.round1) {
        return {false, "round-1 size off at " + p.ToString()};
      }
    }
    for (const auto& m : t.round2) {
      if (Rational::Of(static_cast<int64_t>(m.symbols.size()), L) != want.round2) {
        return {false, "round-2 size off at " + p.ToString()};
      }
    }
    detail << "(" << s[0] << "," << s[1] << "," << s[2] << "): R1=" << want.round1
           << " R2=" << want.round2 << "; ";
  }
  return {true, detail.str()};
}

Outcome Sweep() {
  const SchemeParams p = SchemeParams::Create(5, 2, 3, kDefaultModulus, 20);
  const ValidatedScheme v = BuildValidated(p, 1, 20);
  const SweepReport r = ExhaustiveDropoutSweep(v.family, v.ums, 3, 1);
  std::string d = std::to_string(r.patterns) + " patterns, " + std::to_string(r.decodes) +
                  " decodes, " + std::to_string(r.failures.size()) + " failures";
  return {r.ok() && r.decodes == r.patterns * 3 && r.patterns == 131, d};
}

Outcome Leakage() {
  std::ostringstream d;
  bool ok = true;
  for (const auto& [k, u, s, L] : {std::tuple{5, 2, 3, 20}, std::tuple{4, 2, 2, 8}}) {
    const SchemeParams p = SchemeParams::Create(k, u, s, kDefaultModulus, L);
    const ValidatedScheme v = BuildValidated(p, 1, 20);
    int checked = 0;
    for (const Subset& u1 : SubsetsAtLeast(k, u)) {
      const LeakageReport r = LeakageRank(p, BuildViewSystem(v.family, v.ums, u1));
      ok = ok && r.pass();
      ++checked;
    }
    d << "(" << k << "," << u << "," << s << "): " << checked << " U1 checked";
    const Sabotage sabs[] = {{SabotageMode::kUnmaskedPiece, 2, 0}, {SabotageMode::kZeroKeys, 1, 0}};
    for (const Sabotage& sab : sabs) {
      const LeakageReport r = LeakageRank(p, BuildViewSystem(v.family, v.ums, Range(1, k), sab));
      ok = ok && r.info_view_given_sum > 0;
      d << ", " << SabotageModeName(sab.mode) << " leaks " << r.info_view_given_sum;
    }
    d << "; ";
  }
  return {ok, d.str()};
}

Outcome OracleEquivalence() {
  // L = 2 is not admissible for (3,2,2): U * n_pieces = 4 must divide L.
  std::ostringstream d;
  try {
    SchemeParams::Create(3, 2, 2, 2, 2);
    d << "L=2 accepted; ";
  } catch (const Error&) {
    d << "L=2 rejected (U*n_pieces=4), using L=4; ";
  }
  const SchemeParams p = SchemeParams::Create(3, 2, 2, 2, 4);
  const ValidatedScheme v = BuildValidated(p, 1, 200);
  bool ok = true;
  for (const Subset& u1 : SubsetsAtLeast(3, 2)) {
    const MiResult mi = BruteForceMi(v.family, v.ums, u1);
    const LeakageReport r = LeakageRank(p, BuildViewSystem(v.family, v.ums, u1));
    ok = ok && mi.info == Rational::Of(r.info_view_given_sum, 1) && mi.info.num == 0;
  }
  const Sabotage sab{SabotageMode::kUnmaskedPiece, 1, 0};
  const MiResult mi = BruteForceMi(v.family, v.ums, {1, 2, 3}, sab);
  const LeakageReport r = LeakageRank(p, BuildViewSystem(v.family, v.ums, {1, 2, 3}, sab));
  ok = ok && mi.info == Rational::Of(r.info_view_given_sum, 1) && mi.info.num > 0;
  d << "clean MI 0 for all 4 U1; sabotage MI " << mi.info << " = rank " << r.info_view_given_sum
    << "; " << v.attempts << " attempts";
  return {ok, d.str()};
}

Outcome Pivots() {
  const int shapes[4][2] = {{5, 3}, {6, 2}, {6, 4}, {7, 3}};
  size_t checked = 0, bad = 0;
  for (const auto& s : shapes) {
    const SchemeParams p =
        SchemeParams::Create(s[0], 1, s[1], kDefaultModulus, SchemeParams::MinInputLength(s[0], 1, s[1]));
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      const CoefficientFamily fam = BuildFamily(p, seed);
      for (const Subset& v : fam.groups()) {
        for (int k = 1; k <= s[0]; ++k) {
          if (Contains(v, k)) continue;
          ++checked;
          if (PivotExpand(fam, v, k) != fam.Vector(v)) ++bad;
        }
      }
    }
  }
  return {bad == 0, std::to_string(checked) + " pivots, " + std::to_string(bad) + " failures"};
}

Outcome NullSpaceSweep() {
  // Checked as stated: the inequality always, equality exactly when K = S.
  int cases = 0, violations = 0, mismatches = 0, strict_at_k_eq_s = 0;
  std::string examples;
  for (int k = 2; k <= 10; ++k) {
    for (int s = 2; s <= k; ++s) {
      for (int u = 1; u < k; ++u) {
        ++cases;
        const int64_t lhs = u * Binomial(k - 2, s - 2);
        const int64_t rhs = Binomial(k - 1, s - 1) - Binomial(k - 1 - u, s - 1);
        if (lhs < rhs) ++violations;
        if ((lhs == rhs) != (k == s)) {
          if (k == s) ++strict_at_k_eq_s;
          if (++mismatches <= 4) {
            examples += "(K,U,S)=(" + std::to_string(k) + "," + std::to_string(u) + "," +
                        std::to_string(s) + ") ";
          }
        }
      }
    }
  }
  std::string d = std::to_string(cases) + " cases, " + std::to_string(violations) +
                  " inequality violations, " + std::to_string(mismatches) +
                  " disagreeing with 'equality iff K=S' (" + std::to_string(strict_at_k_eq_s) +
                  " of them strict at K=S)";
  if (mismatches) d += ", e.g. " + examples + "; equality holds iff S=2 or U=1";
  return {violations == 0 && mismatches == 0, d};
}

Outcome Witnesses() {
  const SchemeParams p = SchemeParams::Create(5, 2, 3, kDefaultModulus, 10);
  int cases = 0;
  for (const Subset& u2 : Combinations(5, 2)) {
    for (int u = 1; u <= 5; ++u) {
      if (Contains(u2, u)) continue;
      ++cases;
      const Witness w = BuildWitness(p, u2, u);
      if (!IsRowPermutationOfIdentity(w.decodability)) {
        return {false, "U2={" + SubsetKey(u2) + "} u=" + std::to_string(u) + " not a permutation"};
      }
      for (const Urn& urn : w.urns) {
        if (urn.total() != 2) return {false, "urn not full"};
      }
    }
  }
  return {true, std::to_string(cases) + " (U2, u) cases, all permutations with full urns"};
}

Outcome Loopback() {
  using namespace net;
  const SchemeParams p = SchemeParams::Create(5, 2, 3, 7, 102400);
  const ValidatedScheme v = BuildValidated(p, 3, 64);
  auto fx = std::make_shared<const Fixture>(Fixture{v.family, v.ums, v.attempts});
  const KeyMaterial keys = KeyMaterial::Generate(p, 5);
  const auto inputs = RandomInputs(p, 9);
  const LoopbackResult r = RunLoopback(fx, keys, inputs,
                                       DropPlan::Parse("2:after_round1,4:after_round1"), 0,
                                       Timeouts{}, true);
  if (!r.server.ok()) return {false, "server: " + r.server.error};
  if (*r.server.sum != testing::NaiveSum([&] {
        std::vector<std::vector<Residue>> w;
        for (const auto& in : inputs) w.push_back(in.symbols);
        return w;
      }(), r.server.u1, 7)) {
    return {false, "RESULT differs from the offline sum"};
  }
  const ClientRecord& c = r.clients[0];
  const double rate = static_cast<double>(c.bytes_r1 - kHeaderSize) / p.input_length();
  const double want = p.rates().round1.ToDouble();
  std::ostringstream d;
  d << "U1={" << SubsetKey(r.server.u1) << "} U2={" << SubsetKey(r.server.u2)
    << "} round-1 payload/L=" << rate << " (R1=" << want << ")";

  // Traffic must grow with L.
  const SchemeParams small = SchemeParams::Create(5, 2, 3, 7, 10240);
  const ValidatedScheme vs = BuildValidated(small, 3, 64);
  const LoopbackResult rs = RunLoopback(
      std::make_shared<const Fixture>(Fixture{vs.family, vs.ums, vs.attempts}),
      KeyMaterial::Generate(small, 5), RandomInputs(small, 9), DropPlan::Parse(""), 0,
      Timeouts{}, true);
  const bool grows = rs.server.ok() && rs.clients[0].bytes_r1 < c.bytes_r1;
  d << "; bytes at L=10240: " << rs.clients[0].bytes_r1 << " < " << c.bytes_r1;
  return {std::abs(rate - want) <= 0.01 * want && grows && r.server.u1.size() == 5 &&
              r.server.u2 == Subset({1, 3, 5}),
          d.str()};
}

}  // namespace
}  // namespace gsa

int main() {
  using namespace gsa;
  Report(1, 1, DerivedVectors);
  Report(2, 1, ExampleRanks);
  Report(3, 0, Rates);
  Report(4, 30, Sweep);
  Report(5, 60, Leakage);
  Report(6, 300, OracleEquivalence);
  Report(7, 0, Pivots);
  Report(8, 0, NullSpaceSweep);
  Report(9, 0, Witnesses);
  Report(10, 0, Loopback);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
