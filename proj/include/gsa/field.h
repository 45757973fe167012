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

#ifndef GSA_FIELD_H_
#define GSA_FIELD_H_

#include <cstdint>

namespace gsa {

// Residues are stored as 32-bit words; the modulus must stay below 2^31 so
// that a sum of two residues never wraps and the SIMD kernels can use
// 32-bit lanes.
using Residue = uint32_t;

inline constexpr Residue kDefaultModulus = 2147483647u;  // 2^31 - 1

bool IsPrime(uint64_t n);

// Arithmetic in the prime field F_q. The modulus is carried here (and by the
// containers that own one), never per element.
class PrimeField {
 public:
  // Throws Error(kInvalidArgument) if q is not a prime in [2, 2^31).
  explicit PrimeField(Residue q);

  Residue modulus() const { return q_; }

  Residue Add(Residue a, Residue b) const {
    Residue s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Residue Sub(Residue a, Residue b) const {
    return a >= b ? a - b : a + (q_ - b);
  }
  Residue Neg(Residue a) const { return a == 0 ? 0 : q_ - a; }
  Residue Mul(Residue a, Residue b) const {
    return static_cast<Residue>(static_cast<uint64_t>(a) * b % q_);
  }
  Residue Pow(Residue base, uint64_t exp) const;
  // Throws Error(kInvalidArgument) on zero.
  Residue Inv(Residue a) const;

  // Maps a signed integer (e.g. -2 from a hand-written example) onto [0, q).
  Residue FromSigned(int64_t v) const;

  // (-1)^e as a residue.
  Residue Sign(int e) const { return (e % 2 == 0) ? 1 : q_ - 1; }

 private:
  Residue q_;
};

}  // namespace gsa

#endif  // GSA_FIELD_H_
