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

#ifndef GSA_WITNESS_H_
#define GSA_WITNESS_H_

#include <vector>

#include "gsa/coeff_family.h"

namespace gsa {

// One urn of the ball-and-urn placement: a group V containing the pivot user
// u and meeting U2. `balls[c]` counts balls of colour U2[c] (0-based position
// in U2); the urn is full when the counts sum to U.
struct Urn {
  Subset group;
  std::vector<int> balls;
  int total() const;
};

struct Witness {
  CoefficientFamily family;
  UserMatrixSet ums;
  std::vector<Urn> urns;
  FieldMatrix decodability;
};

// Deterministic construction certifying that the decodability determinant
// is a nonzero polynomial for this U2: the vectors of groups containing u
// are unit vectors, the rest follow from the pivot identity, and each
// S_k (k in U2) selects unit rows of S'_k according to the urn placement.
// Users outside U2 take the first n_pieces rows of their S'_k.
// Throws Error(kInvalidWitnessParams) if |U2| != U or u is in U2.
Witness BuildWitness(const SchemeParams& params, const Subset& u2, int pivot);

// Exactly one 1 per row and per column, zeros elsewhere.
bool IsRowPermutationOfIdentity(const FieldMatrix& m);

}  // namespace gsa

#endif  // GSA_WITNESS_H_
