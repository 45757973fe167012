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

#include "gsa/scheme.h"

#include <algorithm>
#include <cassert>
#include <string>

#include "gsa/error.h"
#include "gsa/rng.h"
#include "gsa/simd/kernels.h"

namespace gsa {
namespace {

void RequireSurvivors(const SchemeParams& p, size_t count, const char* round) {
  if (count < static_cast<size_t>(p.min_survivors())) {
    throw Error(ErrorCode::kTooFewSurvivors,
                std::string(round) + ": " + std::to_string(count) +
                    " survivor(s), need at least " +
                    std::to_string(p.min_survivors()));
  }
}

std::vector<Residue> Flatten(const FieldMatrix& m) {
  return std::vector<Residue>(m.data().begin(), m.data().end());
}

}  // namespace

KeyMaterial::KeyMaterial(const SchemeParams& params, uint64_t seed)
    : params_(params),
      seed_(seed),
      groups_(Combinations(params.users(), params.group_size())),
      keys_(groups_.size()) {}

KeyMaterial KeyMaterial::Generate(const SchemeParams& params, uint64_t seed) {
  KeyMaterial km(params, seed);
  Rng rng(seed, Stream::kKeys);
  for (auto& key : km.keys_) {
    key.resize(params.key_len());
    rng.Fill(key, params.modulus());
  }
  return km;
}

KeyMaterial KeyMaterial::Zero(const SchemeParams& params) {
  KeyMaterial km(params, 0);
  for (auto& key : km.keys_) key.assign(params.key_len(), 0);
  return km;
}

KeyMaterial KeyMaterial::ForUser(int k) const {
  KeyMaterial km(params_, seed_);
  for (size_t g = 0; g < groups_.size(); ++g) {
    if (Contains(groups_[g], k)) km.keys_[g] = keys_[g];
  }
  return km;
}

bool KeyMaterial::HasAll() const {
  return std::all_of(keys_.begin(), keys_.end(),
                     [](const auto& k) { return !k.empty(); });
}

std::span<const Residue> KeyMaterial::Key(size_t group) const {
  if (!Has(group)) {
    throw Error(ErrorCode::kInvalidArgument,
                "key of {" + SubsetKey(groups_[group]) + "} not held");
  }
  return keys_[group];
}

std::span<Residue> KeyMaterial::MutableKey(size_t group) {
  return keys_[group];
}

std::span<const Residue> KeyMaterial::SubKey(size_t group, int member) const {
  const Subset& v = groups_[group];
  if (!Contains(v, member)) {
    throw Error(ErrorCode::kInvalidArgument,
                "user " + std::to_string(member) + " not in {" +
                    SubsetKey(v) + "}");
  }
  return Key(group).subspan(CountBelow(v, member) * params_.subkey_len(),
                            params_.subkey_len());
}

void KeyMaterial::SetKey(size_t group, std::vector<Residue> key) {
  if (key.size() != static_cast<size_t>(params_.key_len())) {
    throw Error(ErrorCode::kLengthMismatch, "key length mismatch");
  }
  keys_[group] = std::move(key);
}

size_t KeyMaterial::total_symbols() const {
  size_t n = 0;
  for (const auto& k : keys_) n += k.size();
  return n;
}

std::vector<InputVector> RandomInputs(const SchemeParams& params,
                                      uint64_t seed) {
  std::vector<InputVector> inputs;
  for (int k = 1; k <= params.users(); ++k) {
    Rng rng(seed, Stream::kInputs, static_cast<uint64_t>(k));
    InputVector in{k, std::vector<Residue>(params.input_length())};
    rng.Fill(in.symbols, params.modulus());
    inputs.push_back(std::move(in));
  }
  return inputs;
}

std::vector<Residue> DirectSum(const SchemeParams& params,
                               std::span<const InputVector> inputs,
                               const Subset& users) {
  std::vector<Residue> sum(params.input_length(), 0);
  for (const InputVector& in : inputs) {
    if (Contains(users, in.owner)) simd::AddMod(sum, in.symbols, params.modulus());
  }
  return sum;
}

Round1Message Round1Encode(const SchemeParams& p,
                           const CoefficientFamily& family,
                           const KeyMaterial& keys, const InputVector& input) {
  if (input.symbols.size() != static_cast<size_t>(p.input_length())) {
    throw Error(ErrorCode::kLengthMismatch,
                "input of user " + std::to_string(input.owner) + " has " +
                    std::to_string(input.symbols.size()) + " symbols, L = " +
                    std::to_string(p.input_length()));
  }
  const int k = input.owner;
  const int64_t len = p.piece_len();
  Round1Message msg{k, std::vector<Residue>(p.round1_symbols(), 0)};
  std::span<Residue> out(msg.symbols);
  std::copy(input.symbols.begin(), input.symbols.end(), msg.symbols.begin());
  for (size_t g : family.GroupsContaining(k)) {
    const auto subkey = keys.SubKey(g, k);
    for (int64_t j = 0; j < p.num_combos(); ++j) {
      simd::AxpyMod(out.subspan(j * len, len), subkey,
                    family.Coefficient(g, j), p.modulus());
    }
  }
  return msg;
}

Round1Aggregate ServerRound1Aggregate(const SchemeParams& p,
                                      std::span<const Round1Message> messages) {
  RequireSurvivors(p, messages.size(), "round 1");
  Round1Aggregate agg;
  std::vector<Residue> total(p.round1_symbols(), 0);
  for (const Round1Message& m : messages) {
    if (m.symbols.size() != total.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "round-1 message of user " + std::to_string(m.sender));
    }
    agg.survivors.push_back(m.sender);
    simd::AddMod(total, m.symbols, p.modulus());
  }
  std::sort(agg.survivors.begin(), agg.survivors.end());
  ValidateSubset(agg.survivors, p.users(), "U1");

  const int64_t len = p.piece_len();
  agg.masked_sums.assign(total.begin(), total.begin() + p.num_pieces() * len);
  // Key-only sums: piece j splits into U coded-key-length slices, slice i
  // being F entry i * C(K-1,S-1) + j.
  const int64_t block = p.codedkey_len();
  for (int i = 0; i < p.min_survivors(); ++i) {
    for (int64_t j = p.num_pieces(); j < p.num_combos(); ++j) {
      auto first = total.begin() + j * len + i * block;
      agg.known_f.emplace_back(i * p.num_combos() + j,
                               std::vector<Residue>(first, first + block));
    }
  }
  std::sort(agg.known_f.begin(), agg.known_f.end());
  return agg;
}

CodedKeys::CodedKeys(const SchemeParams& p, const KeyMaterial& keys,
                     const Subset& survivors)
    : block_len_(p.codedkey_len()),
      known_(keys.groups().size(), false),
      sums_(keys.groups().size(), std::vector<Residue>(p.subkey_len(), 0)) {
  for (size_t g = 0; g < keys.groups().size(); ++g) {
    const Subset& v = keys.groups()[g];
    if (!keys.Has(g) || !Intersects(v, survivors)) continue;
    known_[g] = true;
    for (int member : v) {
      if (Contains(survivors, member)) {
        simd::AddMod(sums_[g], keys.SubKey(g, member), p.modulus());
      }
    }
  }
}

std::span<const Residue> CodedKeys::Block(size_t group, int replica) const {
  return std::span<const Residue>(sums_[group])
      .subspan(replica * block_len_, block_len_);
}

FieldMatrix EvaluateTarget(const SchemeParams& p,
                           const CoefficientFamily& family,
                           const CodedKeys& coded) {
  FieldMatrix target(p.f_len(), p.codedkey_len(), p.field());
  for (int i = 0; i < p.min_survivors(); ++i) {
    for (size_t g = 0; g < family.groups().size(); ++g) {
      if (!coded.Known(g)) continue;
      const auto block = coded.Block(g, i);
      for (int64_t j = 0; j < p.num_combos(); ++j) {
        simd::AxpyMod(target.Row(i * p.num_combos() + j), block,
                      family.Coefficient(g, j), p.modulus());
      }
    }
  }
  return target;
}

Round2Message Round2EncodeFullKnowledge(const SchemeParams& p,
                                        const CoefficientFamily& family,
                                        const UserMatrixSet& ums,
                                        const KeyMaterial& all_keys, int k,
                                        const Subset& survivors) {
  if (!all_keys.HasAll()) {
    throw Error(ErrorCode::kInvalidArgument, "full knowledge needs all keys");
  }
  const FieldMatrix target =
      EvaluateTarget(p, family, CodedKeys(p, all_keys, survivors));
  return Round2Message{k, survivors, Flatten(Multiply(ums.S(k), target))};
}

Round2Message Round2Encode(const SchemeParams& p,
                           const CoefficientFamily& family,
                           const UserMatrixSet& ums, const KeyMaterial& keys,
                           int k, const Subset& survivors) {
  ValidateSubset(survivors, p.users(), "U1");
  RequireSurvivors(p, survivors.size(), "round 2");
  if (!Contains(survivors, k)) {
    throw Error(ErrorCode::kNotASurvivor,
                "user " + std::to_string(k) + " is not in U1");
  }
  // Only the coded keys of k's own groups enter the computation.
  KeyMaterial own = keys.ForUser(k);
  for (size_t g : family.GroupsContaining(k)) {
    if (!own.Has(g)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "user " + std::to_string(k) + " lacks key of {" +
                      SubsetKey(family.groups()[g]) + "}");
    }
  }
  const FieldMatrix target = EvaluateTarget(p, family, CodedKeys(p, own, survivors));
  Round2Message msg{k, survivors, Flatten(Multiply(ums.S(k), target))};
#ifndef NDEBUG
  if (keys.HasAll()) {
    assert(msg.symbols ==
           Round2EncodeFullKnowledge(p, family, ums, keys, k, survivors)
               .symbols);
  }
#endif
  return msg;
}

std::vector<Residue> ServerDecode(const SchemeParams& p,
                                  const CoefficientFamily& family,
                                  const UserMatrixSet& ums,
                                  const Round1Aggregate& aggregate,
                                  std::span<const Round2Message> round2) {
  (void)family;
  RequireSurvivors(p, aggregate.survivors.size(), "round 1");
  std::vector<const Round2Message*> by_sender;
  for (const Round2Message& m : round2) {
    if (!Contains(aggregate.survivors, m.sender)) {
      throw Error(ErrorCode::kNotASurvivor,
                  "round-2 message from user " + std::to_string(m.sender) +
                      " outside U1");
    }
    if (m.survivors != aggregate.survivors) {
      throw Error(ErrorCode::kInvalidArgument,
                  "round-2 message of user " + std::to_string(m.sender) +
                      " was computed for a different U1");
    }
    if (m.symbols.size() != static_cast<size_t>(p.round2_symbols())) {
      throw Error(ErrorCode::kLengthMismatch,
                  "round-2 message of user " + std::to_string(m.sender));
    }
    by_sender.push_back(&m);
  }
  std::sort(by_sender.begin(), by_sender.end(),
            [](auto* a, auto* b) { return a->sender < b->sender; });
  by_sender.erase(std::unique(by_sender.begin(), by_sender.end(),
                              [](auto* a, auto* b) {
                                return a->sender == b->sender;
                              }),
                  by_sender.end());
  RequireSurvivors(p, by_sender.size(), "round 2");

  const size_t u = p.min_survivors();
  Subset chosen;
  for (size_t i = 0; i < u; ++i) chosen.push_back(by_sender[i]->sender);
  const FieldMatrix system = DecodabilityMatrix(p, ums, chosen);

  const int64_t block = p.codedkey_len();
  FieldMatrix rhs(system.rows(), block, p.field());
  size_t row = 0;
  for (size_t i = 0; i < u; ++i) {
    const auto& sym = by_sender[i]->symbols;
    for (int64_t r = 0; r < p.num_pieces(); ++r, ++row) {
      std::copy_n(sym.begin() + r * block, block, rhs.Row(row).begin());
    }
  }
  for (const auto& [index, values] : aggregate.known_f) {
    (void)index;
    std::copy(values.begin(), values.end(), rhs.Row(row++).begin());
  }

  FieldMatrix target;
  try {
    target = SolveSquare(system, rhs);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularMatrix) throw;
    throw Error(ErrorCode::kSingularDecodeMatrix,
                "U2 {" + SubsetKey(chosen) + "}: " + e.what());
  }

#ifndef NDEBUG
  // Redundant round-2 messages must agree with the recovered F.
  for (size_t i = u; i < by_sender.size(); ++i) {
    const FieldMatrix expect = Multiply(ums.S(by_sender[i]->sender), target);
    assert(std::equal(expect.data().begin(), expect.data().end(),
                      by_sender[i]->symbols.begin()));
  }
#endif

  // Piece j of the mask is the concatenation over replicas of F entries
  // i * C(K-1,S-1) + j.
  const int64_t len = p.piece_len();
  std::vector<Residue> sum = aggregate.masked_sums;
  std::span<Residue> out(sum);
  for (int64_t j = 0; j < p.num_pieces(); ++j) {
    for (int i = 0; i < p.min_survivors(); ++i) {
      simd::SubMod(out.subspan(j * len + i * block, block),
                   target.Row(i * p.num_combos() + j), p.modulus());
    }
  }
  return sum;
}

void ValidateSurvivorSets(const SchemeParams& p, const Subset& u1,
                          const Subset& u2) {
  ValidateSubset(u1, p.users(), "U1");
  ValidateSubset(u2, p.users(), "U2");
  if (!IsSubsetOf(u2, u1)) {
    throw Error(ErrorCode::kInvalidArgument,
                "U2 {" + SubsetKey(u2) + "} is not a subset of U1 {" +
                    SubsetKey(u1) + "}");
  }
  if (u2.size() < static_cast<size_t>(p.min_survivors())) {
    throw Error(ErrorCode::kInvalidArgument,
                "|U2| = " + std::to_string(u2.size()) + " < U = " +
                    std::to_string(p.min_survivors()));
  }
}

Transcript Simulate(const CoefficientFamily& family, const UserMatrixSet& ums,
                    const KeyMaterial& keys,
                    std::span<const InputVector> inputs, const Subset& u1,
                    const Subset& u2) {
  const SchemeParams& p = family.params();
  ValidateSurvivorSets(p, u1, u2);
  Transcript t{p, family.seed(), keys.seed(), 0, u1, u2, {}, {}, {}, {}};
  for (const InputVector& in : inputs) {
    t.round1.push_back(Round1Encode(p, family, keys.ForUser(in.owner), in));
  }
  for (int k : u1) {
    t.round2.push_back(Round2Encode(p, family, ums, keys.ForUser(k), k, u1));
  }
  try {
    t.decoded = DecodeTranscript(family, ums, t);
  } catch (const Error& e) {
    t.failure = e.what();
  }
  return t;
}

std::vector<Residue> DecodeTranscript(const CoefficientFamily& family,
                                      const UserMatrixSet& ums,
                                      const Transcript& t) {
  const SchemeParams& p = family.params();
  std::vector<Round1Message> first;
  for (const Round1Message& m : t.round1) {
    if (Contains(t.u1, m.sender)) first.push_back(m);
  }
  std::vector<Round2Message> second;
  for (const Round2Message& m : t.round2) {
    if (Contains(t.u2, m.sender)) second.push_back(m);
  }
  const Round1Aggregate agg = ServerRound1Aggregate(p, first);
  return ServerDecode(p, family, ums, agg, second);
}

}  // namespace gsa
