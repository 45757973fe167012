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

#ifndef GSA_SCHEME_H_
#define GSA_SCHEME_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsa/coeff_family.h"

namespace gsa {

// Groupwise keys. Z_V holds S * piece_len symbols; the sub-key of the member
// at position p of V (ascending ids) is the p-th piece_len-long slice.
// A user's view holds only the keys of its own groups.
class KeyMaterial {
 public:
  static KeyMaterial Generate(const SchemeParams& params, uint64_t seed);
  static KeyMaterial Zero(const SchemeParams& params);

  // The keys user k holds (groups containing k).
  KeyMaterial ForUser(int k) const;

  const SchemeParams& params() const { return params_; }
  uint64_t seed() const { return seed_; }
  const std::vector<Subset>& groups() const { return groups_; }

  bool Has(size_t group) const { return !keys_[group].empty(); }
  bool HasAll() const;
  std::span<const Residue> Key(size_t group) const;
  std::span<Residue> MutableKey(size_t group);
  // Z_{V,member}. Throws Error(kInvalidArgument) if member is not in V.
  std::span<const Residue> SubKey(size_t group, int member) const;
  void SetKey(size_t group, std::vector<Residue> key);

  size_t total_symbols() const;

 private:
  KeyMaterial(const SchemeParams& params, uint64_t seed);

  SchemeParams params_;
  uint64_t seed_;
  std::vector<Subset> groups_;
  std::vector<std::vector<Residue>> keys_;
};

struct InputVector {
  int owner = 0;
  std::vector<Residue> symbols;

  std::span<const Residue> Piece(const SchemeParams& params, int64_t j) const {
    return std::span<const Residue>(symbols).subspan(j * params.piece_len(),
                                                     params.piece_len());
  }
};

// Uniform inputs for users 1..K, drawn from a stream disjoint from the keys.
std::vector<InputVector> RandomInputs(const SchemeParams& params,
                                      uint64_t seed);

// Sum of W_k over k in `users`, length L.
std::vector<Residue> DirectSum(const SchemeParams& params,
                               std::span<const InputVector> inputs,
                               const Subset& users);

struct Round1Message {
  int sender = 0;
  // C(K-1,S-1) blocks X_{k,1..} of piece_len symbols, concatenated.
  std::vector<Residue> symbols;
};

struct Round2Message {
  int sender = 0;
  Subset survivors;
  // n_pieces blocks of codedkey_len symbols, concatenated.
  std::vector<Residue> symbols;
};

// X_{k,j} = W_{k,j} + sum_{V∋k} a_{V,j} Z_{V,k} for j < n_pieces and the
// key-only combination for the remaining blocks.
// Throws Error(kLengthMismatch) if |W_k| != L.
Round1Message Round1Encode(const SchemeParams& params,
                           const CoefficientFamily& family,
                           const KeyMaterial& keys, const InputVector& input);

struct Round1Aggregate {
  Subset survivors;
  // sum_{k∈U1} X_{k,j} for j < n_pieces, concatenated.
  std::vector<Residue> masked_sums;
  // F entries already determined by round 1: (index into F, codedkey_len
  // symbols), sorted by index.
  std::vector<std::pair<size_t, std::vector<Residue>>> known_f;
};

// Throws Error(kTooFewSurvivors) if fewer than U messages,
// Error(kLengthMismatch) on a malformed message.
Round1Aggregate ServerRound1Aggregate(const SchemeParams& params,
                                      std::span<const Round1Message> messages);

// Z^{U1}_V = sum_{k∈V∩U1} Z_{V,k} for every group the holder knows and that
// meets U1; other groups read as zero. Coded key i is the i-th of U
// contiguous slices.
class CodedKeys {
 public:
  CodedKeys(const SchemeParams& params, const KeyMaterial& keys,
            const Subset& survivors);

  bool Known(size_t group) const { return known_[group]; }
  std::span<const Residue> Block(size_t group, int replica) const;
  std::span<const Residue> Sum(size_t group) const { return sums_[group]; }

 private:
  int64_t block_len_;
  std::vector<bool> known_;
  std::vector<std::vector<Residue>> sums_;
};

// Rows of F (U*C(K-1,S-1) x codedkey_len) evaluated from `coded`, with every
// group for which `coded.Known` is false contributing zero.
FieldMatrix EvaluateTarget(const SchemeParams& params,
                           const CoefficientFamily& family,
                           const CodedKeys& coded);

// Y = S_k * F, computed from the keys user k holds. Coded keys of groups
// avoiding k are evaluated as zero, which is exact because S_k * F has
// structural zeros there. When `keys` holds every group the result is
// cross-checked against the full computation in builds with assertions
// enabled.
// Throws Error(kNotASurvivor) if k ∉ U1, Error(kTooFewSurvivors) if |U1| < U.
Round2Message Round2Encode(const SchemeParams& params,
                           const CoefficientFamily& family,
                           const UserMatrixSet& ums, const KeyMaterial& keys,
                           int k, const Subset& survivors);

// S_k * F with every coded key known. Needs all keys.
Round2Message Round2EncodeFullKnowledge(const SchemeParams& params,
                                        const CoefficientFamily& family,
                                        const UserMatrixSet& ums,
                                        const KeyMaterial& all_keys, int k,
                                        const Subset& survivors);

// Recovers sum_{k∈U1} W_k from the round-1 aggregate and the round-2
// messages of U2. Uses the U lowest ids of U2.
// Throws Error(kTooFewSurvivors) or Error(kSingularDecodeMatrix).
std::vector<Residue> ServerDecode(const SchemeParams& params,
                                  const CoefficientFamily& family,
                                  const UserMatrixSet& ums,
                                  const Round1Aggregate& aggregate,
                                  std::span<const Round2Message> round2);

// Everything one aggregation epoch produced, with the worst-case view: all K
// round-1 messages and round-2 messages from every user in U1.
struct Transcript {
  SchemeParams params;
  uint64_t fixture_seed = 0;
  uint64_t key_seed = 0;
  uint64_t input_seed = 0;
  Subset u1;
  Subset u2;
  std::vector<Round1Message> round1;
  std::vector<Round2Message> round2;
  std::optional<std::vector<Residue>> decoded;
  std::string failure;
};

// Throws Error(kInvalidArgument) unless U2 ⊆ U1 ⊆ [K] with |U2| >= U.
void ValidateSurvivorSets(const SchemeParams& params, const Subset& u1,
                          const Subset& u2);

// Runs both rounds in-process and decodes from U1's round-1 and U2's
// round-2 messages.
Transcript Simulate(const CoefficientFamily& family, const UserMatrixSet& ums,
                    const KeyMaterial& keys,
                    std::span<const InputVector> inputs, const Subset& u1,
                    const Subset& u2);

// Re-runs the server side on a recorded transcript.
std::vector<Residue> DecodeTranscript(const CoefficientFamily& family,
                                      const UserMatrixSet& ums,
                                      const Transcript& transcript);

}  // namespace gsa

#endif  // GSA_SCHEME_H_
