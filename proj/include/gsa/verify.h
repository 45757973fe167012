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

#ifndef GSA_VERIFY_H_
#define GSA_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gsa/params.h"
#include "gsa/scheme.h"
#include "json.hpp"

namespace gsa {

// Deliberate breaks of the round-1 encoder. A verifier must flag them.
enum class SabotageMode {
  kNone,
  // X_{user, piece} carries W_{user, piece} with no key added.
  kUnmaskedPiece,
  // Every key is zero.
  kZeroKeys,
};

struct Sabotage {
  SabotageMode mode = SabotageMode::kNone;
  int user = 1;
  int64_t piece = 0;  // 0-based
};

// Sabotage::mode parsed from "none", "unmasked", "zero-keys".
SabotageMode ParseSabotageMode(const std::string& name);
std::string SabotageModeName(SabotageMode mode);

// Concatenation of X_1..X_K followed by Y_k for k in U1 (ascending): the
// server's view when every round-1 message arrives eventually.
std::vector<Residue> ConcreteView(const CoefficientFamily& family,
                                  const UserMatrixSet& ums,
                                  const KeyMaterial& keys,
                                  std::span<const InputVector> inputs,
                                  const Subset& u1, const Sabotage& sabotage);

// view = input_map * w + key_map * z and sum = sum_map * w, where w stacks
// W_1..W_K and z stacks the keys Z_V in group order.
struct ViewSystem {
  Subset u1;
  FieldMatrix input_map;
  FieldMatrix key_map;
  FieldMatrix sum_map;
  size_t input_symbols() const { return input_map.cols(); }
  size_t key_symbols() const { return key_map.cols(); }
  size_t view_symbols() const { return input_map.rows(); }
};

// Builds the maps from the encoding equations, then evaluates both them and
// ConcreteView on `checks` random (w, z) draws.
// Throws Error(kTraceMismatch) on disagreement, Error(kTooFewSurvivors) if
// |U1| < U.
ViewSystem BuildViewSystem(const CoefficientFamily& family,
                           const UserMatrixSet& ums, const Subset& u1,
                           const Sabotage& sabotage = {}, int checks = 10,
                           uint64_t seed = 0);

// All quantities in q-ary symbols.
struct LeakageReport {
  Subset u1;
  int64_t h_view = 0;               // rank [input_map | key_map]
  int64_t h_view_given_inputs = 0;  // rank key_map
  int64_t info_view = 0;            // I(W; view)
  int64_t info_view_given_sum = 0;  // I(W; view | sum)
  int64_t input_length = 0;
  bool pass() const {
    return info_view_given_sum == 0 && info_view == input_length;
  }
};

LeakageReport LeakageRank(const SchemeParams& params, const ViewSystem& vs);

// Exact I(W; view | sum over U1) by enumerating every (w, z).
struct MiResult {
  Rational info;        // q-ary symbols
  double shannon = 0;   // same quantity from the empirical entropies
  uint64_t states = 0;
};

// Throws Error(kTooLargeToEnumerate) above 2^26 states or when a view does
// not pack into 64 bits; Error(kTraceMismatch) if the encoders are not
// linear or a marginal is not uniform.
MiResult BruteForceMi(const CoefficientFamily& family, const UserMatrixSet& ums,
                      const Subset& u1, const Sabotage& sabotage = {});

// Number of states BruteForceMi would enumerate, saturating at UINT64_MAX.
uint64_t EnumerationStates(const SchemeParams& params);
inline constexpr uint64_t kMaxEnumerationStates = uint64_t{1} << 26;

struct SweepFailure {
  Subset u1;
  Subset u2;
  int trial = 0;
  std::string reason;
  nlohmann::json transcript;
};

struct SweepReport {
  size_t patterns = 0;
  size_t decodes = 0;
  std::vector<SweepFailure> failures;
  bool ok() const { return failures.empty(); }
};

// Every (U1, U2) with U2 ⊆ U1 ⊆ [K], |U2| >= U, in
// SubsetsAtLeast order.
std::vector<std::pair<Subset, Subset>> DropoutPatterns(const SchemeParams& p);
inline constexpr size_t kMaxSweepPatterns = 100000;

// Decodes `trials` fresh key/input draws per pattern and compares with the
// direct sum. Throws Error(kTooLargeToEnumerate) above kMaxSweepPatterns.
SweepReport ExhaustiveDropoutSweep(const CoefficientFamily& family,
                                   const UserMatrixSet& ums, int trials,
                                   uint64_t seed, unsigned threads = 0);

}  // namespace gsa

#endif  // GSA_VERIFY_H_
