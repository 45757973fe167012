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

#include "gsa/coeff_family.h"

#include <string>

#include "gsa/error.h"
#include "gsa/rng.h"

namespace gsa {

CoefficientFamily::CoefficientFamily(const SchemeParams& params, uint64_t seed)
    : params_(params),
      seed_(seed),
      groups_(Combinations(params.users(), params.group_size())),
      containing_(params.users()),
      avoiding_(params.users()),
      vectors_(params.num_combos(), groups_.size(), params.field()) {
  for (size_t g = 0; g < groups_.size(); ++g) {
    index_.emplace(groups_[g], g);
    for (int k = 1; k <= params.users(); ++k) {
      (Contains(groups_[g], k) ? containing_ : avoiding_)[k - 1].push_back(g);
    }
  }
}

CoefficientFamily CoefficientFamily::FromVectors(const SchemeParams& params,
                                                 uint64_t seed,
                                                 FieldMatrix vectors) {
  CoefficientFamily family(params, seed);
  if (vectors.rows() != family.vectors_.rows() ||
      vectors.cols() != family.vectors_.cols() ||
      vectors.modulus() != params.modulus()) {
    throw Error(ErrorCode::kInvalidArgument,
                "coefficient matrix must be " +
                    std::to_string(family.vectors_.rows()) + "x" +
                    std::to_string(family.vectors_.cols()));
  }
  family.vectors_ = std::move(vectors);
  return family;
}

CoefficientFamily CoefficientFamily::FromBaseVectors(const SchemeParams& params,
                                                     uint64_t seed,
                                                     const FieldMatrix& base) {
  CoefficientFamily family(params, seed);
  const auto& with_one = family.GroupsContaining(1);
  if (base.rows() != family.vectors_.rows() ||
      base.cols() != with_one.size()) {
    throw Error(ErrorCode::kInvalidArgument, "base vectors have wrong shape");
  }
  for (size_t i = 0; i < with_one.size(); ++i) {
    family.vectors_.SetColumn(with_one[i], base.Column(i));
  }
  const PrimeField& f = params.field();
  const size_t n = family.vectors_.rows();
  for (size_t g : family.GroupsAvoiding(1)) {
    const Subset& v = family.groups_[g];
    std::vector<Residue> acc(n, 0);
    for (size_t i = 0; i < v.size(); ++i) {
      const size_t src = family.GroupIndex(Replace(v, v[i], 1));
      const Residue sign = f.Sign(static_cast<int>(i));
      for (size_t j = 0; j < n; ++j) {
        acc[j] = f.Add(acc[j], f.Mul(sign, family.vectors_(j, src)));
      }
    }
    family.vectors_.SetColumn(g, acc);
  }
  return family;
}

size_t CoefficientFamily::GroupIndex(const Subset& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "{" + SubsetKey(v) + "} is not a group of size " +
                    std::to_string(params_.group_size()));
  }
  return it->second;
}

FieldMatrix CoefficientFamily::SecurityMatrix(int k) const {
  return vectors_.SelectColumns(GroupsContaining(k));
}

FieldMatrix CoefficientFamily::AlignmentMatrix(int k) const {
  return vectors_.SelectColumns(GroupsAvoiding(k));
}

void CoefficientFamily::SetVector(const Subset& v,
                                  std::span<const Residue> values) {
  vectors_.SetColumn(GroupIndex(v), values);
}

CoefficientFamily BuildFamily(const SchemeParams& params, uint64_t seed) {
  const size_t n = params.num_combos();
  FieldMatrix base(n, n, params.field());
  Rng rng(seed, Stream::kFamily);
  // Column by column: vector a_V for the i-th group containing user 1.
  for (size_t c = 0; c < n; ++c) {
    for (size_t r = 0; r < n; ++r) {
      base(r, c) = static_cast<Residue>(rng.Uniform(params.modulus()));
    }
  }
  return CoefficientFamily::FromBaseVectors(params, seed, base);
}

std::vector<Residue> PivotExpand(const CoefficientFamily& family,
                                 const Subset& v, int k) {
  if (Contains(v, k)) {
    throw Error(ErrorCode::kInvalidPivot,
                "pivot " + std::to_string(k) + " lies in {" + SubsetKey(v) +
                    "}");
  }
  const PrimeField& f = family.params().field();
  const int s = static_cast<int>(v.size());
  const int below = CountBelow(v, k);
  const size_t n = family.vectors().rows();
  std::vector<Residue> acc(n, 0);
  auto accumulate = [&](int pos, int exponent) {
    const size_t g = family.GroupIndex(Replace(v, v[pos - 1], k));
    const Residue sign = f.Sign(exponent);
    for (size_t j = 0; j < n; ++j) {
      acc[j] = f.Add(acc[j], f.Mul(sign, family.Coefficient(g, j)));
    }
  };
  for (int i1 = below + 1; i1 <= s; ++i1) accumulate(i1, i1 - below - 1);
  for (int i2 = 1; i2 <= below; ++i2) accumulate(i2, below + i2);
  return acc;
}

std::vector<size_t> SecurityRanks(const CoefficientFamily& family) {
  std::vector<size_t> ranks;
  for (int k = 1; k <= family.params().users(); ++k) {
    ranks.push_back(Rank(family.SecurityMatrix(k)));
  }
  return ranks;
}

std::vector<size_t> AlignmentRanks(const CoefficientFamily& family) {
  std::vector<size_t> ranks;
  for (int k = 1; k <= family.params().users(); ++k) {
    ranks.push_back(Rank(family.AlignmentMatrix(k)));
  }
  return ranks;
}

bool VerifySecurityRank(const CoefficientFamily& family) {
  const size_t want = family.params().num_combos();
  for (size_t r : SecurityRanks(family)) {
    if (r != want) return false;
  }
  return true;
}

bool VerifyAlignmentRank(const CoefficientFamily& family) {
  const auto& p = family.params();
  const size_t want = Binomial(p.users() - 2, p.group_size() - 1);
  for (size_t r : AlignmentRanks(family)) {
    if (r != want) return false;
  }
  return true;
}

UserMatrixSet::UserMatrixSet(const SchemeParams& params, uint64_t seed,
                             std::vector<Entry> entries)
    : params_(params), seed_(seed), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<size_t>(params.users())) {
    throw Error(ErrorCode::kInvalidArgument, "one entry per user required");
  }
  for (int k = 1; k <= params.users(); ++k) SetS(k, entries_[k - 1].s);
}

void UserMatrixSet::SetS(int k, FieldMatrix s) {
  if (s.rows() != static_cast<size_t>(params_.num_pieces()) ||
      s.cols() != static_cast<size_t>(params_.f_len()) ||
      s.modulus() != params_.modulus()) {
    throw Error(ErrorCode::kInvalidArgument,
                "S_" + std::to_string(k) + " must be " +
                    std::to_string(params_.num_pieces()) + "x" +
                    std::to_string(params_.f_len()));
  }
  entries_[k - 1].s = std::move(s);
}

FieldMatrix TargetCoefficients(const CoefficientFamily& family) {
  return BlockDiagonal(family.vectors(), family.params().min_survivors());
}

UserMatrixSet BuildUserMatrices(const CoefficientFamily& family,
                                uint64_t seed) {
  const SchemeParams& p = family.params();
  const size_t want_rank = Binomial(p.users() - 2, p.group_size() - 1);
  std::vector<UserMatrixSet::Entry> entries;
  for (int k = 1; k <= p.users(); ++k) {
    const FieldMatrix aligned = family.AlignmentMatrix(k);
    const size_t rank = Rank(aligned);
    if (rank != want_rank) {
      throw Error(ErrorCode::kAlignmentRankFailure,
                  "user " + std::to_string(k) + ": rank " +
                      std::to_string(rank) + " != " +
                      std::to_string(want_rank));
    }
    FieldMatrix basis = LeftNullBasis(aligned);
    const FieldMatrix expanded = BlockDiagonal(basis, p.min_survivors());
    FieldMatrix mix(p.num_pieces(), expanded.rows(), p.field());
    Rng rng(seed, Stream::kUserMatrices, static_cast<uint64_t>(k));
    for (size_t r = 0; r < mix.rows(); ++r) rng.Fill(mix.Row(r), p.modulus());
    entries.push_back({std::move(basis), Multiply(mix, expanded)});
  }
  return UserMatrixSet(p, seed, std::move(entries));
}

bool VerifyStructuralZeros(const CoefficientFamily& family,
                           const UserMatrixSet& ums) {
  const SchemeParams& p = family.params();
  const FieldMatrix target = TargetCoefficients(family);
  for (int k = 1; k <= p.users(); ++k) {
    const FieldMatrix product = Multiply(ums.S(k), target);
    for (int i = 0; i < p.min_survivors(); ++i) {
      for (size_t g : family.GroupsAvoiding(k)) {
        const size_t col = i * p.num_groups() + g;
        for (size_t r = 0; r < product.rows(); ++r) {
          if (product(r, col) != 0) return false;
        }
      }
    }
  }
  return true;
}

FieldMatrix DecodabilityMatrix(const SchemeParams& p, const UserMatrixSet& ums,
                               const Subset& u2) {
  ValidateSubset(u2, p.users(), "U2");
  if (u2.size() != static_cast<size_t>(p.min_survivors())) {
    throw Error(ErrorCode::kInvalidArgument,
                "decodability matrix needs exactly U users");
  }
  std::vector<FieldMatrix> blocks;
  for (int k : u2) blocks.push_back(ums.S(k));
  const size_t known_per_replica = p.num_combos() - p.num_pieces();
  FieldMatrix known(p.min_survivors() * known_per_replica, p.f_len(),
                    p.field());
  size_t row = 0;
  for (int i = 0; i < p.min_survivors(); ++i) {
    for (int64_t j = p.num_pieces(); j < p.num_combos(); ++j) {
      known(row++, i * p.num_combos() + j) = 1;
    }
  }
  blocks.push_back(std::move(known));
  return VStack(blocks);
}

std::vector<Subset> DecodabilityFailures(const CoefficientFamily& family,
                                         const UserMatrixSet& ums) {
  const SchemeParams& p = family.params();
  std::vector<Subset> failures;
  for (const Subset& u2 : Combinations(p.users(), p.min_survivors())) {
    const FieldMatrix m = DecodabilityMatrix(p, ums, u2);
    if (Rank(m) != m.rows()) failures.push_back(u2);
  }
  return failures;
}

bool VerifyDecodability(const CoefficientFamily& family,
                        const UserMatrixSet& ums) {
  return DecodabilityFailures(family, ums).empty();
}

ValidatedScheme BuildValidated(const SchemeParams& params, uint64_t seed,
                               int max_attempts) {
  if (max_attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
  }
  std::string last_failure;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    const uint64_t attempt_seed =
        attempt == 1 ? seed : DeriveSeed(seed, attempt);
    CoefficientFamily family = BuildFamily(params, attempt_seed);
    std::string failed;
    if (!VerifySecurityRank(family)) failed += "security-rank ";
    if (!VerifyAlignmentRank(family)) failed += "alignment-rank ";
    if (failed.empty()) {
      UserMatrixSet ums = BuildUserMatrices(family, attempt_seed);
      if (VerifyDecodability(family, ums)) {
        return ValidatedScheme{std::move(family), std::move(ums), attempt};
      }
      failed = "decodability ";
    }
    failed.pop_back();
    last_failure = failed;
  }
  throw Error(ErrorCode::kExhaustedAttempts,
              std::to_string(max_attempts) +
                  " attempt(s) failed; last failed check: " + last_failure);
}

}  // namespace gsa
