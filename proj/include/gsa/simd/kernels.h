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

#ifndef GSA_SIMD_KERNELS_H_
#define GSA_SIMD_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

#include "gsa/field.h"

namespace gsa::simd {

// Element-wise vector kernels over F_q. Every variant must produce
// bit-identical output to the scalar reference for inputs already reduced
// mod q (q prime, q < 2^31). Destination and source must not overlap.
struct KernelTable {
  std::string_view name;
  // dst[i] = dst[i] + c * src[i]
  void (*axpy)(Residue* dst, const Residue* src, size_t n, Residue c, Residue q);
  // dst[i] = c * dst[i]
  void (*scale)(Residue* dst, size_t n, Residue c, Residue q);
  // dst[i] = dst[i] + src[i]
  void (*add)(Residue* dst, const Residue* src, size_t n, Residue q);
  // dst[i] = dst[i] - src[i]
  void (*sub)(Residue* dst, const Residue* src, size_t n, Residue q);
};

const KernelTable& ScalarKernels();

// nullptr when the binary was built without AVX2 support or the running CPU
// lacks it.
const KernelTable* Avx2Kernels();

// The table used by the library. Picks the widest variant the CPU supports,
// unless the GSA_SIMD environment variable is set to "scalar".
const KernelTable& ActiveKernels();

inline void AxpyMod(std::span<Residue> dst, std::span<const Residue> src,
                    Residue c, Residue q) {
  if (c == 0) return;
  ActiveKernels().axpy(dst.data(), src.data(), dst.size(), c, q);
}

inline void ScaleMod(std::span<Residue> dst, Residue c, Residue q) {
  ActiveKernels().scale(dst.data(), dst.size(), c, q);
}

inline void AddMod(std::span<Residue> dst, std::span<const Residue> src,
                   Residue q) {
  ActiveKernels().add(dst.data(), src.data(), dst.size(), q);
}

inline void SubMod(std::span<Residue> dst, std::span<const Residue> src,
                   Residue q) {
  ActiveKernels().sub(dst.data(), src.data(), dst.size(), q);
}

}  // namespace gsa::simd

#endif  // GSA_SIMD_KERNELS_H_
