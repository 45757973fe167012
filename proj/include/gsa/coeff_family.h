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

#ifndef GSA_COEFF_FAMILY_H_
#define GSA_COEFF_FAMILY_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gsa/combinatorics.h"
#include "gsa/matrix.h"
#include "gsa/params.h"

namespace gsa {

// The coefficient vectors a_V, one per S-subset V of [K], each of length
// C(K-1, S-1). Stored as the matrix A whose column g is a_V for the g-th group
// in lexicographic order.
class CoefficientFamily {
 public:
  // `base` is C(K-1,S-1) x C(K-1,S-1); column i is a_V for the i-th group
  // containing user 1 (lexicographic). Every other vector is the alternating
  // sum a_V = sum_i (-1)^(i-1) a_{V \ V(i) ∪ {1}}.
  static CoefficientFamily FromBaseVectors(const SchemeParams& params,
                                           uint64_t seed,
                                           const FieldMatrix& base);

  // Takes every vector as given (fixture import, hand-built witnesses). No
  // structural property is assumed.
  static CoefficientFamily FromVectors(const SchemeParams& params,
                                       uint64_t seed, FieldMatrix vectors);

  const SchemeParams& params() const { return params_; }
  uint64_t seed() const { return seed_; }
  const std::vector<Subset>& groups() const { return groups_; }
  const FieldMatrix& vectors() const { return vectors_; }

  // Throws Error(kInvalidArgument) when v is not an S-subset of [K].
  size_t GroupIndex(const Subset& v) const;
  std::vector<Residue> Vector(const Subset& v) const {
    return vectors_.Column(GroupIndex(v));
  }
  // a_{V, j} with 0-based j.
  Residue Coefficient(size_t group, size_t j) const {
    return vectors_(j, group);
  }

  // Group indices containing / avoiding user k, lexicographic.
  const std::vector<size_t>& GroupsContaining(int k) const {
    return containing_[k - 1];
  }
  const std::vector<size_t>& GroupsAvoiding(int k) const {
    return avoiding_[k - 1];
  }

  // [a_{S_{k,1}}, ..., a_{S_{k,C(K-1,S-1)}}]
  FieldMatrix SecurityMatrix(int k) const;
  // [a_V : k not in V]
  FieldMatrix AlignmentMatrix(int k) const;

  // Overwrites one vector; test fixtures use this to break the family.
  void SetVector(const Subset& v, std::span<const Residue> values);

 private:
  CoefficientFamily(const SchemeParams& params, uint64_t seed);

  SchemeParams params_;
  uint64_t seed_;
  std::vector<Subset> groups_;
  std::map<Subset, size_t> index_;
  std::vector<std::vector<size_t>> containing_;
  std::vector<std::vector<size_t>> avoiding_;
  FieldMatrix vectors_;
};

// Step 1 draws the vectors of the groups containing user 1 uniformly from
// the seed; step 2 derives the rest.
CoefficientFamily BuildFamily(const SchemeParams& params, uint64_t seed);

// Right-hand side of the pivot identity: re-expresses a_V through the
// vectors of the groups V \ V(i) ∪ {k}. Throws Error(kInvalidPivot) if k ∈ V.
std::vector<Residue> PivotExpand(const CoefficientFamily& family,
                                 const Subset& v, int k);

// Rank of SecurityMatrix(k) / AlignmentMatrix(k), indexed by k - 1.
std::vector<size_t> SecurityRanks(const CoefficientFamily& family);
std::vector<size_t> AlignmentRanks(const CoefficientFamily& family);

// Every SecurityMatrix(k) has full rank C(K-1, S-1).
bool VerifySecurityRank(const CoefficientFamily& family);
// Every AlignmentMatrix(k) has rank exactly C(K-2, S-1).
bool VerifyAlignmentRank(const CoefficientFamily& family);

// Per-user second-round matrices.
class UserMatrixSet {
 public:
  struct Entry {
    // Rows span the left null space of AlignmentMatrix(k). May be empty for
    // imported fixtures, which only carry S_k.
    FieldMatrix null_basis;
    // n_pieces x U*C(K-1,S-1).
    FieldMatrix s;
  };

  UserMatrixSet(const SchemeParams& params, uint64_t seed,
                std::vector<Entry> entries);

  const SchemeParams& params() const { return params_; }
  uint64_t seed() const { return seed_; }
  const FieldMatrix& S(int k) const { return entries_[k - 1].s; }
  const FieldMatrix& NullBasis(int k) const {
    return entries_[k - 1].null_basis;
  }
  void SetS(int k, FieldMatrix s);

 private:
  SchemeParams params_;
  uint64_t seed_;
  std::vector<Entry> entries_;
};

// Coefficient layout of the second-round target: F = blockdiag(A, ..., A)
// with U copies. Row (i * C(K-1,S-1) + j) is F entry j of replica i;
// column (i * C(K,S) + g) is coded key i of group g (all 0-based).
FieldMatrix TargetCoefficients(const CoefficientFamily& family);

// S'_k = blockdiag(null_basis, ..., null_basis), S_k = R * S'_k with R drawn
// uniformly (zero allowed). Throws Error(kAlignmentRankFailure) if any
// alignment matrix has the wrong rank.
UserMatrixSet BuildUserMatrices(const CoefficientFamily& family,
                                uint64_t seed);

// True iff S_k * F is zero on every coded-key column of a group avoiding k.
bool VerifyStructuralZeros(const CoefficientFamily& family,
                           const UserMatrixSet& ums);

// Rows: S_{U2(1)}, ..., S_{U2(U)}, then the unit rows of the F entries the
// server already knows after round 1. |U2| must equal U.
FieldMatrix DecodabilityMatrix(const SchemeParams& params,
                               const UserMatrixSet& ums, const Subset& u2);

// U-subsets U2 of [K] whose decodability matrix is singular.
std::vector<Subset> DecodabilityFailures(const CoefficientFamily& family,
                                         const UserMatrixSet& ums);
bool VerifyDecodability(const CoefficientFamily& family,
                        const UserMatrixSet& ums);

struct ValidatedScheme {
  CoefficientFamily family;
  UserMatrixSet ums;
  int attempts;
};

// Resamples family and user matrices together until all three checks pass.
// Attempt 1 uses `seed` itself; later attempts use DeriveSeed(seed, n).
// Throws Error(kExhaustedAttempts) naming the failed checks.
ValidatedScheme BuildValidated(const SchemeParams& params, uint64_t seed,
                               int max_attempts);

}  // namespace gsa

#endif  // GSA_COEFF_FAMILY_H_
