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

// Reference kernels: plain 64-bit multiply and remainder, one lane at a time.

#include <cstdint>

#include "gsa/simd/kernels.h"

namespace gsa::simd {
namespace {

void AxpyScalar(Residue* dst, const Residue* src, size_t n, Residue c,
                Residue q) {
  for (size_t i = 0; i < n; ++i) {
    dst[i] = static_cast<Residue>(
        (static_cast<uint64_t>(src[i]) * c + dst[i]) % q);
  }
}

void ScaleScalar(Residue* dst, size_t n, Residue c, Residue q) {
  for (size_t i = 0; i < n; ++i) {
    dst[i] = static_cast<Residue>(static_cast<uint64_t>(dst[i]) * c % q);
  }
}

void AddScalar(Residue* dst, const Residue* src, size_t n, Residue q) {
  for (size_t i = 0; i < n; ++i) {
    Residue s = dst[i] + src[i];
    dst[i] = s >= q ? s - q : s;
  }
}

void SubScalar(Residue* dst, const Residue* src, size_t n, Residue q) {
  for (size_t i = 0; i < n; ++i) {
    dst[i] = dst[i] >= src[i] ? dst[i] - src[i] : dst[i] + (q - src[i]);
  }
}

}  // namespace

const KernelTable& ScalarKernels() {
  static const KernelTable table{"scalar", AxpyScalar, ScaleScalar, AddScalar,
                                 SubScalar};
  return table;
}

}  // namespace gsa::simd
