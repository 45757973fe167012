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

#include "gsa/witness.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "gsa/error.h"

namespace gsa {
namespace {

// Cyclic position in [1, n].
int Cyclic(int x, int n) { return ((x - 1) % n + n) % n + 1; }

}  // namespace

int Urn::total() const { return std::accumulate(balls.begin(), balls.end(), 0); }

Witness BuildWitness(const SchemeParams& p, const Subset& u2, int pivot) {
  const int users = p.users();
  const int survivors = p.min_survivors();
  try {
    ValidateSubset(u2, users, "U2");
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidWitnessParams, e.what());
  }
  if (u2.size() != static_cast<size_t>(survivors) || pivot < 1 ||
      pivot > users || Contains(u2, pivot)) {
    throw Error(ErrorCode::kInvalidWitnessParams,
                "need |U2| = U and a pivot user outside U2");
  }

  const PrimeField& f = p.field();
  const size_t combos = p.num_combos();
  const size_t pieces = p.num_pieces();

  // Unit vectors for the groups containing the pivot: groups meeting U2
  // take e_1.., the others continue after n_pieces.
  std::vector<Subset> meeting;
  std::vector<Subset> missing;
  for (const Subset& v : Combinations(users, p.group_size())) {
    if (!Contains(v, pivot)) continue;
    (Intersects(v, u2) ? meeting : missing).push_back(v);
  }
  std::map<Subset, size_t> unit_index;
  for (size_t i = 0; i < meeting.size(); ++i) unit_index[meeting[i]] = i;
  for (size_t i = 0; i < missing.size(); ++i) {
    unit_index[missing[i]] = pieces + i;
  }

  const std::vector<Subset> groups = Combinations(users, p.group_size());
  FieldMatrix vectors(combos, groups.size(), f);
  for (size_t g = 0; g < groups.size(); ++g) {
    const Subset& v = groups[g];
    if (Contains(v, pivot)) {
      vectors(unit_index.at(v), g) = 1;
      continue;
    }
    const int below = CountBelow(v, pivot);
    const int s = static_cast<int>(v.size());
    for (int i = 1; i <= s; ++i) {
      const int exponent = i > below ? i - below - 1 : below + i;
      const size_t row = unit_index.at(Replace(v, v[i - 1], pivot));
      vectors(row, g) = f.Add(vectors(row, g), f.Sign(exponent));
    }
  }
  CoefficientFamily family =
      CoefficientFamily::FromVectors(p, /*seed=*/0, std::move(vectors));

  // Ball placement. Colour U2(c) drops one ball per step t in [1, U] into
  // every urn that contains {u, U2(c)} and avoids the next t-1 members of U2
  // cyclically after c.
  std::vector<Urn> urns;
  for (const Subset& v : meeting) urns.push_back({v, std::vector<int>(survivors, 0)});
  for (int c = 1; c <= survivors; ++c) {
    const int colour = u2[c - 1];
    for (int t = 1; t <= survivors; ++t) {
      for (Urn& urn : urns) {
        if (!Contains(urn.group, colour)) continue;
        bool clear = true;
        for (int d = 1; d < t && clear; ++d) {
          clear = !Contains(urn.group, u2[Cyclic(c + d, survivors) - 1]);
        }
        if (clear) ++urn.balls[c - 1];
      }
    }
  }

  // Each urn V = meeting[i] hands its replicas to its colours in ascending
  // order: the first x_1 replicas to the smallest colour present, and so on.
  std::vector<std::vector<size_t>> picks(survivors);
  for (size_t i = 0; i < urns.size(); ++i) {
    int replica = 0;
    for (int c = 0; c < survivors; ++c) {
      for (int b = 0; b < urns[i].balls[c] && replica < survivors; ++b) {
        picks[c].push_back(replica * combos + i);
        ++replica;
      }
    }
  }

  std::vector<UserMatrixSet::Entry> entries;
  for (int k = 1; k <= users; ++k) {
    FieldMatrix basis = LeftNullBasis(family.AlignmentMatrix(k));
    FieldMatrix s(pieces, p.f_len(), f);
    const auto pos = std::find(u2.begin(), u2.end(), k);
    if (pos != u2.end()) {
      const auto& chosen = picks[pos - u2.begin()];
      if (chosen.size() != pieces) {
        throw Error(ErrorCode::kInvalidWitnessParams,
                    "colour " + std::to_string(k) + " placed " +
                        std::to_string(chosen.size()) + " balls, expected " +
                        std::to_string(pieces));
      }
      for (size_t r = 0; r < pieces; ++r) s(r, chosen[r]) = 1;
    } else {
      const FieldMatrix expanded = BlockDiagonal(basis, survivors);
      for (size_t r = 0; r < pieces && r < expanded.rows(); ++r) {
        std::copy_n(expanded.Row(r).begin(), s.cols(), s.Row(r).begin());
      }
    }
    entries.push_back({std::move(basis), std::move(s)});
  }
  UserMatrixSet ums(p, /*seed=*/0, std::move(entries));
  FieldMatrix decodability = DecodabilityMatrix(p, ums, u2);
  return Witness{std::move(family), std::move(ums), std::move(urns),
                 std::move(decodability)};
}

bool IsRowPermutationOfIdentity(const FieldMatrix& m) {
  if (m.rows() != m.cols()) return false;
  std::vector<int> column_hits(m.cols(), 0);
  for (size_t r = 0; r < m.rows(); ++r) {
    int ones = 0;
    for (size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) == 0) continue;
      if (m(r, c) != 1) return false;
      ++ones;
      ++column_hits[c];
    }
    if (ones != 1) return false;
  }
  for (int hits : column_hits) {
    if (hits != 1) return false;
  }
  return true;
}

}  // namespace gsa
