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

#ifndef GSA_PARAMS_H_
#define GSA_PARAMS_H_

#include <cstdint>
#include <ostream>
#include <string>

#include "gsa/field.h"

namespace gsa {

// Exact non-negative rational, always in lowest terms with den > 0.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  static Rational Of(int64_t num, int64_t den);
  double ToDouble() const { return static_cast<double>(num) / den; }
  std::string ToString() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend Rational operator+(const Rational& a, const Rational& b) {
    return Of(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Of(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Of(a.num * b.num, a.den * b.den);
  }
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

struct RatePair {
  Rational round1;
  Rational round2;
};

// Optimal (R1, R2) for the (K, U, S) problem. Throws Error(kInfeasibleS) for
// S = 1 and Error(kInvalidParams) for K, U, S outside 1 <= U < K, 1 <= S <= K.
RatePair AchievedRates(int users, int min_survivors, int group_size);

// First-round overhead over the unconstrained-key optimum R1 = 1.
Rational RoundOneOverhead(int users, int min_survivors, int group_size);

// (K, U, S, q, L) plus the lengths every other component derives from them.
class SchemeParams {
 public:
  // Throws Error(kInfeasibleS) for S = 1, Error(kInvalidParams) for any other
  // violated constraint (including U * n_pieces not dividing L).
  static SchemeParams Create(int users, int min_survivors, int group_size,
                             Residue modulus, int64_t input_length);

  // Smallest admissible L for (K, U, S): U * n_pieces.
  static int64_t MinInputLength(int users, int min_survivors, int group_size);

  int users() const { return users_; }
  int min_survivors() const { return min_survivors_; }
  int group_size() const { return group_size_; }
  Residue modulus() const { return field_.modulus(); }
  const PrimeField& field() const { return field_; }
  int64_t input_length() const { return input_length_; }

  // C(K, S): number of groups / keys.
  int64_t num_groups() const { return num_groups_; }
  // C(K-1, S-1): round-1 blocks per user and coefficient vector length.
  int64_t num_combos() const { return num_combos_; }
  // C(K-1, S-1) - C(K-1-U, S-1): input pieces per user.
  int64_t num_pieces() const { return num_pieces_; }
  // C(K-2, S-2): left null space dimension per user.
  int64_t null_dim() const { return null_dim_; }
  int64_t piece_len() const { return input_length_ / num_pieces_; }
  int64_t subkey_len() const { return piece_len(); }
  int64_t key_len() const { return group_size_ * piece_len(); }
  int64_t codedkey_len() const { return piece_len() / min_survivors_; }
  // U * C(K-1, S-1): entries of the second-round target F.
  int64_t f_len() const { return min_survivors_ * num_combos_; }

  int64_t round1_symbols() const { return num_combos_ * piece_len(); }
  int64_t round2_symbols() const { return num_pieces_ * codedkey_len(); }
  RatePair rates() const {
    return AchievedRates(users_, min_survivors_, group_size_);
  }

  std::string ToString() const;

  friend bool operator==(const SchemeParams& a, const SchemeParams& b) {
    return a.users_ == b.users_ && a.min_survivors_ == b.min_survivors_ &&
           a.group_size_ == b.group_size_ && a.modulus() == b.modulus() &&
           a.input_length_ == b.input_length_;
  }

 private:
  SchemeParams(int users, int min_survivors, int group_size,
               const PrimeField& field, int64_t input_length);

  int users_;
  int min_survivors_;
  int group_size_;
  PrimeField field_;
  int64_t input_length_;
  int64_t num_groups_;
  int64_t num_combos_;
  int64_t num_pieces_;
  int64_t null_dim_;
};

}  // namespace gsa

#endif  // GSA_PARAMS_H_
