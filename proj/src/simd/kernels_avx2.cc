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

// AVX2 kernels. Multiplication by a fixed scalar uses Shoup's precomputed
// quotient: with c' = floor(c * 2^32 / q), the estimate floor(x * c' / 2^32)
// is off by at most one, so x*c - est*q (mod 2^32) lands in [0, 2q) and a
// single conditional subtraction finishes the reduction. Requires q < 2^31.

#include <immintrin.h>

#include <cstdint>

#include "gsa/simd/kernels.h"

namespace gsa::simd {

const KernelTable& ScalarKernels();

namespace {

// r in [0, 2q) -> r mod q, lane-wise. min_epu32(r, r - q) picks r - q exactly
// when it did not wrap.
inline __m256i Reduce2q(__m256i r, __m256i vq) {
  return _mm256_min_epu32(r, _mm256_sub_epi32(r, vq));
}

// High 32 bits of the 32x32 products x[i] * w, for all eight lanes.
inline __m256i MulHi32(__m256i x, __m256i vw) {
  __m256i even = _mm256_srli_epi64(_mm256_mul_epu32(x, vw), 32);
  __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), vw);
  return _mm256_blend_epi32(even, odd, 0xAA);
}

inline __m256i MulModShoup(__m256i x, __m256i vc, __m256i vc_shoup,
                           __m256i vq) {
  __m256i est = MulHi32(x, vc_shoup);
  __m256i r = _mm256_sub_epi32(_mm256_mullo_epi32(x, vc),
                               _mm256_mullo_epi32(est, vq));
  return Reduce2q(r, vq);
}

inline Residue ShoupConstant(Residue c, Residue q) {
  return static_cast<Residue>((static_cast<uint64_t>(c) << 32) / q);
}

void AxpyAvx2(Residue* dst, const Residue* src, size_t n, Residue c,
              Residue q) {
  const __m256i vq = _mm256_set1_epi32(static_cast<int>(q));
  const __m256i vc = _mm256_set1_epi32(static_cast<int>(c));
  const __m256i vcs = _mm256_set1_epi32(static_cast<int>(ShoupConstant(c, q)));
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    __m256i p = MulModShoup(x, vc, vcs, vq);
    d = Reduce2q(_mm256_add_epi32(d, p), vq);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), d);
  }
  ScalarKernels().axpy(dst + i, src + i, n - i, c, q);
}

void ScaleAvx2(Residue* dst, size_t n, Residue c, Residue q) {
  const __m256i vq = _mm256_set1_epi32(static_cast<int>(q));
  const __m256i vc = _mm256_set1_epi32(static_cast<int>(c));
  const __m256i vcs = _mm256_set1_epi32(static_cast<int>(ShoupConstant(c, q)));
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                        MulModShoup(x, vc, vcs, vq));
  }
  ScalarKernels().scale(dst + i, n - i, c, q);
}

void AddAvx2(Residue* dst, const Residue* src, size_t n, Residue q) {
  const __m256i vq = _mm256_set1_epi32(static_cast<int>(q));
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                        Reduce2q(_mm256_add_epi32(a, b), vq));
  }
  ScalarKernels().add(dst + i, src + i, n - i, q);
}

void SubAvx2(Residue* dst, const Residue* src, size_t n, Residue q) {
  const __m256i vq = _mm256_set1_epi32(static_cast<int>(q));
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    // a - b + q lies in [1, 2q).
    __m256i d = _mm256_add_epi32(_mm256_sub_epi32(a, b), vq);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), Reduce2q(d, vq));
  }
  ScalarKernels().sub(dst + i, src + i, n - i, q);
}

}  // namespace

const KernelTable& Avx2KernelTable() {
  static const KernelTable table{"avx2", AxpyAvx2, ScaleAvx2, AddAvx2, SubAvx2};
  return table;
}

}  // namespace gsa::simd
