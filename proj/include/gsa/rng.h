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

#ifndef GSA_RNG_H_
#define GSA_RNG_H_

#include <cstdint>
#include <random>
#include <span>

#include "gsa/field.h"

namespace gsa {

// Independent streams derived from one user-visible seed. Keys and inputs use
// different streams so they are independent by construction.
enum class Stream : uint64_t {
  kFamily = 1,
  kUserMatrices = 2,
  kKeys = 3,
  kInputs = 4,
  kGeneric = 5,
  kDropPlan = 6,
};

// Deterministic uniform sampler. Built on std::mt19937_64 (whose output is
// fixed by the standard) with explicit rejection sampling, so draws do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed, Stream stream = Stream::kGeneric,
               uint64_t substream = 0);

  uint64_t Next() { return engine_(); }
  // Uniform in [0, bound). bound > 0.
  uint64_t Uniform(uint64_t bound);
  void Fill(std::span<Residue> out, Residue q);
  double UniformUnit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// Mixes a seed with an attempt counter (splitmix64 finalizer).
uint64_t DeriveSeed(uint64_t seed, uint64_t salt);

}  // namespace gsa

#endif  // GSA_RNG_H_
