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

#include "gsa/field.h"

#include <string>

#include "gsa/error.h"

namespace gsa {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInfeasibleS: return "InfeasibleS";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kInvalidPivot: return "InvalidPivot";
    case ErrorCode::kAlignmentRankFailure: return "AlignmentRankFailure";
    case ErrorCode::kExhaustedAttempts: return "ExhaustedAttempts";
    case ErrorCode::kInvalidWitnessParams: return "InvalidWitnessParams";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooFewSurvivors: return "TooFewSurvivors";
    case ErrorCode::kNotASurvivor: return "NotASurvivor";
    case ErrorCode::kSingularDecodeMatrix: return "SingularDecodeMatrix";
    case ErrorCode::kTraceMismatch: return "TraceMismatch";
    case ErrorCode::kTooLargeToEnumerate: return "TooLargeToEnumerate";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kConnectionLost: return "ConnectionLost";
    case ErrorCode::kFormat: return "Format";
  }
  return "Unknown";
}

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(Residue q) : q_(q) {
  if (q >= (1u << 31) || !IsPrime(q)) {
    throw Error(ErrorCode::kInvalidArgument,
                "modulus " + std::to_string(q) + " is not a prime below 2^31");
  }
}

Residue PrimeField::Pow(Residue base, uint64_t exp) const {
  uint64_t result = 1 % q_;
  uint64_t b = base % q_;
  while (exp > 0) {
    if (exp & 1) result = result * b % q_;
    b = b * b % q_;
    exp >>= 1;
  }
  return static_cast<Residue>(result);
}

Residue PrimeField::Inv(Residue a) const {
  if (a % q_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "inverse of zero");
  }
  return Pow(a, q_ - 2);
}

Residue PrimeField::FromSigned(int64_t v) const {
  int64_t r = v % static_cast<int64_t>(q_);
  if (r < 0) r += q_;
  return static_cast<Residue>(r);
}

}  // namespace gsa
