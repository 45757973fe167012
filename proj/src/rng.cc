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

#include "gsa/rng.h"

namespace gsa {
namespace {

std::seed_seq MakeSeedSeq(uint64_t seed, Stream stream, uint64_t substream) {
  return std::seed_seq{static_cast<uint32_t>(seed),
                       static_cast<uint32_t>(seed >> 32),
                       static_cast<uint32_t>(stream),
                       static_cast<uint32_t>(substream),
                       static_cast<uint32_t>(substream >> 32)};
}

}  // namespace

Rng::Rng(uint64_t seed, Stream stream, uint64_t substream) {
  std::seed_seq seq = MakeSeedSeq(seed, stream, substream);
  engine_.seed(seq);
}

uint64_t Rng::Uniform(uint64_t bound) {
  // Largest multiple of bound representable; reject draws above it.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

void Rng::Fill(std::span<Residue> out, Residue q) {
  for (Residue& v : out) v = static_cast<Residue>(Uniform(q));
}

uint64_t DeriveSeed(uint64_t seed, uint64_t salt) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace gsa
