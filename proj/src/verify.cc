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

#include "gsa/verify.h"

#include <algorithm>
#include <thread>
#include <tuple>

#include "gsa/error.h"
#include "gsa/rng.h"
#include "gsa/transcript_io.h"

namespace gsa {

SabotageMode ParseSabotageMode(const std::string& name) {
  if (name == "none") return SabotageMode::kNone;
  if (name == "unmasked") return SabotageMode::kUnmaskedPiece;
  if (name == "zero-keys") return SabotageMode::kZeroKeys;
  throw Error(ErrorCode::kInvalidArgument, "unknown sabotage mode '" + name + "'");
}

std::string SabotageModeName(SabotageMode mode) {
  switch (mode) {
    case SabotageMode::kNone: return "none";
    case SabotageMode::kUnmaskedPiece: return "unmasked";
    case SabotageMode::kZeroKeys: return "zero-keys";
  }
  return "?";
}

std::vector<Residue> ConcreteView(const CoefficientFamily& family,
                                  const UserMatrixSet& ums,
                                  const KeyMaterial& keys,
                                  std::span<const InputVector> inputs,
                                  const Subset& u1, const Sabotage& sabotage) {
  const SchemeParams& p = family.params();
  const KeyMaterial& used =
      sabotage.mode == SabotageMode::kZeroKeys ? KeyMaterial::Zero(p) : keys;
  std::vector<Residue> view;
  view.reserve(p.users() * p.round1_symbols() + u1.size() * p.round2_symbols());
  for (const InputVector& in : inputs) {
    Round1Message m = Round1Encode(p, family, used.ForUser(in.owner), in);
    if (sabotage.mode == SabotageMode::kUnmaskedPiece &&
        in.owner == sabotage.user) {
      const auto piece = in.Piece(p, sabotage.piece);
      std::copy(piece.begin(), piece.end(),
                m.symbols.begin() + sabotage.piece * p.piece_len());
    }
    view.insert(view.end(), m.symbols.begin(), m.symbols.end());
  }
  for (int k : u1) {
    const Round2Message m = Round2Encode(p, family, ums, used.ForUser(k), k, u1);
    view.insert(view.end(), m.symbols.begin(), m.symbols.end());
  }
  return view;
}

namespace {

std::vector<Residue> Apply(const FieldMatrix& m, std::span<const Residue> x) {
  const PrimeField& f = m.field();
  std::vector<Residue> out(m.rows(), 0);
  for (size_t r = 0; r < m.rows(); ++r) {
    uint64_t acc = 0;
    const auto row = m.Row(r);
    for (size_t c = 0; c < m.cols(); ++c) {
      if (row[c] != 0) acc = (acc + uint64_t{row[c]} * x[c]) % f.modulus();
    }
    out[r] = static_cast<Residue>(acc);
  }
  return out;
}

}  // namespace

ViewSystem BuildViewSystem(const CoefficientFamily& family,
                           const UserMatrixSet& ums, const Subset& u1,
                           const Sabotage& sabotage, int checks,
                           uint64_t seed) {
  const SchemeParams& p = family.params();
  const PrimeField& f = p.field();
  ValidateSubset(u1, p.users(), "U1");
  if (u1.size() < static_cast<size_t>(p.min_survivors())) {
    throw Error(ErrorCode::kTooFewSurvivors, "|U1| < U");
  }
  if (sabotage.mode == SabotageMode::kUnmaskedPiece &&
      (sabotage.user < 1 || sabotage.user > p.users() || sabotage.piece < 0 ||
       sabotage.piece >= p.num_pieces())) {
    throw Error(ErrorCode::kInvalidArgument, "sabotage target out of range");
  }
  const int64_t L = p.input_length();
  const int64_t len = p.piece_len();
  const int64_t block = p.codedkey_len();
  const int64_t C = p.num_combos();
  const size_t n_groups = family.groups().size();
  const size_t rows = p.users() * p.round1_symbols() + u1.size() * p.round2_symbols();
  const bool keys_live = sabotage.mode != SabotageMode::kZeroKeys;

  ViewSystem vs{u1, FieldMatrix(rows, p.users() * L, f),
                FieldMatrix(rows, n_groups * p.key_len(), f),
                FieldMatrix(L, p.users() * L, f)};
  auto key_var = [&](size_t g, int member, int64_t offset) {
    return g * p.key_len() + CountBelow(family.groups()[g], member) * len + offset;
  };

  for (int k = 1; k <= p.users(); ++k) {
    const size_t base = (k - 1) * p.round1_symbols();
    for (int64_t j = 0; j < C; ++j) {
      const bool unmasked = sabotage.mode == SabotageMode::kUnmaskedPiece &&
                            sabotage.user == k && sabotage.piece == j;
      for (int64_t t = 0; t < len; ++t) {
        const size_t r = base + j * len + t;
        if (j < p.num_pieces()) vs.input_map(r, (k - 1) * L + j * len + t) = 1;
        if (unmasked || !keys_live) continue;
        for (size_t g : family.GroupsContaining(k)) {
          vs.key_map(r, key_var(g, k, t)) = family.Coefficient(g, j);
        }
      }
    }
  }

  // F entry (i, j) at offset t is sum_g a_{g,j} sum_{m ∈ g∩U1} Z_{g,m}[i*block + t].
  size_t row = p.users() * p.round1_symbols();
  for (int k : u1) {
    const FieldMatrix& s = ums.S(k);
    for (size_t r = 0; r < s.rows(); ++r) {
      for (int64_t t = 0; t < block; ++t, ++row) {
        if (!keys_live) continue;
        for (int i = 0; i < p.min_survivors(); ++i) {
          for (int64_t j = 0; j < C; ++j) {
            const Residue sc = s(r, i * C + j);
            if (sc == 0) continue;
            for (size_t g = 0; g < n_groups; ++g) {
              const Residue c = f.Mul(sc, family.Coefficient(g, j));
              if (c == 0) continue;
              for (int m : family.groups()[g]) {
                if (!Contains(u1, m)) continue;
                Residue& e = vs.key_map(row, key_var(g, m, i * block + t));
                e = f.Add(e, c);
              }
            }
          }
        }
      }
    }
  }

  for (int k : u1) {
    for (int64_t t = 0; t < L; ++t) vs.sum_map(t, (k - 1) * L + t) = 1;
  }

  for (int trial = 0; trial < checks; ++trial) {
    const uint64_t draw = DeriveSeed(seed, trial);
    const KeyMaterial keys = KeyMaterial::Generate(p, draw);
    const std::vector<InputVector> inputs = RandomInputs(p, draw);
    std::vector<Residue> w, z;
    for (const InputVector& in : inputs) {
      w.insert(w.end(), in.symbols.begin(), in.symbols.end());
    }
    for (size_t g = 0; g < n_groups; ++g) {
      const auto key = keys.Key(g);
      z.insert(z.end(), key.begin(), key.end());
    }
    std::vector<Residue> traced = Apply(vs.input_map, w);
    const std::vector<Residue> keyed = Apply(vs.key_map, z);
    for (size_t r = 0; r < rows; ++r) traced[r] = f.Add(traced[r], keyed[r]);
    if (traced != ConcreteView(family, ums, keys, inputs, u1, sabotage)) {
      throw Error(ErrorCode::kTraceMismatch,
                  "view maps disagree with the encoders for U1 {" +
                      SubsetKey(u1) + "}");
    }
    const std::vector<Residue> direct = DirectSum(p, inputs, u1);
    if (Apply(vs.sum_map, w) != direct) {
      throw Error(ErrorCode::kTraceMismatch, "sum map disagrees");
    }
  }
  return vs;
}

LeakageReport LeakageRank(const SchemeParams& params, const ViewSystem& vs) {
  const PrimeField& f = params.field();
  const size_t n_in = vs.input_symbols();
  const size_t n_key = vs.key_symbols();
  FieldMatrix joint(vs.view_symbols(), n_in + n_key, f);
  FieldMatrix with_sum(vs.view_symbols() + vs.sum_map.rows(), n_in + n_key, f);
  for (size_t r = 0; r < vs.view_symbols(); ++r) {
    std::copy(vs.input_map.Row(r).begin(), vs.input_map.Row(r).end(),
              joint.Row(r).begin());
    std::copy(vs.key_map.Row(r).begin(), vs.key_map.Row(r).end(),
              joint.Row(r).begin() + n_in);
    std::copy(joint.Row(r).begin(), joint.Row(r).end(), with_sum.Row(r).begin());
  }
  for (size_t r = 0; r < vs.sum_map.rows(); ++r) {
    std::copy(vs.sum_map.Row(r).begin(), vs.sum_map.Row(r).end(),
              with_sum.Row(vs.view_symbols() + r).begin());
  }
  LeakageReport rep;
  rep.u1 = vs.u1;
  rep.input_length = params.input_length();
  rep.h_view = static_cast<int64_t>(Rank(joint));
  rep.h_view_given_inputs = static_cast<int64_t>(Rank(vs.key_map));
  rep.info_view = rep.h_view - rep.h_view_given_inputs;
  rep.info_view_given_sum = static_cast<int64_t>(Rank(with_sum)) -
                            static_cast<int64_t>(Rank(vs.sum_map)) -
                            rep.h_view_given_inputs;
  return rep;
}

std::vector<std::pair<Subset, Subset>> DropoutPatterns(const SchemeParams& p) {
  size_t count = 0;
  for (int m = p.min_survivors(); m <= p.users(); ++m) {
    for (int n = p.min_survivors(); n <= m; ++n) {
      count += Binomial(p.users(), m) * Binomial(m, n);
    }
  }
  if (count > kMaxSweepPatterns) {
    throw Error(ErrorCode::kTooLargeToEnumerate,
                std::to_string(count) + " dropout patterns exceed the cap of " +
                    std::to_string(kMaxSweepPatterns));
  }
  std::vector<std::pair<Subset, Subset>> out;
  out.reserve(count);
  for (const Subset& u1 : SubsetsAtLeast(p.users(), p.min_survivors())) {
    for (int n = p.min_survivors(); n <= static_cast<int>(u1.size()); ++n) {
      for (const Subset& u2 : CombinationsOf(u1, n)) out.emplace_back(u1, u2);
    }
  }
  return out;
}

SweepReport ExhaustiveDropoutSweep(const CoefficientFamily& family,
                                   const UserMatrixSet& ums, int trials,
                                   uint64_t seed, unsigned threads) {
  const SchemeParams& p = family.params();
  const auto patterns = DropoutPatterns(p);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<size_t>(patterns.size(), 1));

  std::vector<std::vector<SweepFailure>> failures(threads);
  std::vector<size_t> decodes(threads, 0);
  auto work = [&](unsigned worker) {
    for (size_t idx = worker; idx < patterns.size(); idx += threads) {
      const auto& [u1, u2] = patterns[idx];
      for (int trial = 0; trial < trials; ++trial) {
        const uint64_t draw = DeriveSeed(seed, idx * 1000003u + trial);
        const KeyMaterial keys = KeyMaterial::Generate(p, draw);
        const std::vector<InputVector> inputs = RandomInputs(p, draw);
        std::string reason;
        Transcript t{p, family.seed(), draw, draw, u1, u2, {}, {}, {}, {}};
        try {
          t = Simulate(family, ums, keys, inputs, u1, u2);
          t.input_seed = draw;
          if (!t.decoded) {
            reason = "decode failed: " + t.failure;
          } else if (*t.decoded != DirectSum(p, inputs, u1)) {
            reason = "decoded sum differs from the direct sum";
          }
        } catch (const std::exception& e) {
          reason = e.what();
        }
        ++decodes[worker];
        if (!reason.empty()) {
          failures[worker].push_back(
              SweepFailure{u1, u2, trial, reason, TranscriptToJson(t)});
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& th : pool) th.join();

  SweepReport report;
  report.patterns = patterns.size();
  for (unsigned w = 0; w < threads; ++w) {
    report.decodes += decodes[w];
    for (auto& fl : failures[w]) report.failures.push_back(std::move(fl));
  }
  std::sort(report.failures.begin(), report.failures.end(),
            [](const SweepFailure& a, const SweepFailure& b) {
              return std::tie(a.u1, a.u2, a.trial) < std::tie(b.u1, b.u2, b.trial);
            });
  return report;
}

}  // namespace gsa
