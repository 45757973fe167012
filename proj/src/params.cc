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

#include "gsa/params.h"

#include <numeric>

#include "gsa/combinatorics.h"
#include "gsa/error.h"

namespace gsa {
namespace {

void CheckShape(int users, int min_survivors, int group_size) {
  if (users < 2 || min_survivors < 1 || min_survivors >= users ||
      group_size < 1 || group_size > users) {
    throw Error(ErrorCode::kInvalidParams,
                "need 1 <= U < K and 1 <= S <= K, got (K,U,S)=(" +
                    std::to_string(users) + "," +
                    std::to_string(min_survivors) + "," +
                    std::to_string(group_size) + ")");
  }
  if (group_size == 1) {
    throw Error(ErrorCode::kInfeasibleS,
                "S = 1: secure aggregation is not possible with keys known "
                "to single users");
  }
}

int64_t Pieces(int k, int u, int s) {
  return Binomial(k - 1, s - 1) - Binomial(k - 1 - u, s - 1);
}

}  // namespace

Rational Rational::Of(int64_t num, int64_t den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int64_t g = std::gcd(num < 0 ? -num : num, den);
  return Rational{num / (g ? g : 1), den / (g ? g : 1)};
}

std::string Rational::ToString() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.ToString();
}

RatePair AchievedRates(int users, int min_survivors, int group_size) {
  CheckShape(users, min_survivors, group_size);
  return RatePair{
      Rational::Of(Binomial(users - 1, group_size - 1),
                   Pieces(users, min_survivors, group_size)),
      Rational::Of(1, min_survivors)};
}

Rational RoundOneOverhead(int users, int min_survivors, int group_size) {
  CheckShape(users, min_survivors, group_size);
  return Rational::Of(Binomial(users - 1 - min_survivors, group_size - 1),
                      Pieces(users, min_survivors, group_size));
}

int64_t SchemeParams::MinInputLength(int users, int min_survivors,
                                     int group_size) {
  CheckShape(users, min_survivors, group_size);
  return min_survivors * Pieces(users, min_survivors, group_size);
}

SchemeParams SchemeParams::Create(int users, int min_survivors, int group_size,
                                  Residue modulus, int64_t input_length) {
  CheckShape(users, min_survivors, group_size);
  PrimeField field = [&] {
    try {
      return PrimeField(modulus);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidParams, e.what());
    }
  }();
  const int64_t unit = MinInputLength(users, min_survivors, group_size);
  if (input_length <= 0 || input_length % unit != 0) {
    throw Error(ErrorCode::kInvalidParams,
                "L = " + std::to_string(input_length) +
                    " must be a positive multiple of U * n_pieces = " +
                    std::to_string(unit));
  }
  return SchemeParams(users, min_survivors, group_size, field, input_length);
}

SchemeParams::SchemeParams(int users, int min_survivors, int group_size,
                           const PrimeField& field, int64_t input_length)
    : users_(users),
      min_survivors_(min_survivors),
      group_size_(group_size),
      field_(field),
      input_length_(input_length),
      num_groups_(Binomial(users, group_size)),
      num_combos_(Binomial(users - 1, group_size - 1)),
      num_pieces_(Pieces(users, min_survivors, group_size)),
      null_dim_(Binomial(users - 2, group_size - 2)) {}

std::string SchemeParams::ToString() const {
  return "(K,U,S)=(" + std::to_string(users_) + "," +
         std::to_string(min_survivors_) + "," + std::to_string(group_size_) +
         ") q=" + std::to_string(modulus()) +
         " L=" + std::to_string(input_length_);
}

}  // namespace gsa
