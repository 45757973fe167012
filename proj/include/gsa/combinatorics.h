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

#ifndef GSA_COMBINATORICS_H_
#define GSA_COMBINATORICS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace gsa {

// A set of 1-based user ids, always sorted ascending.
using Subset = std::vector<int>;

// C(n, k), with C(n, k) = 0 whenever k < 0, n < 0 or k > n.
int64_t Binomial(int64_t n, int64_t k);

// All k-subsets of [1..n] in lexicographic order.
std::vector<Subset> Combinations(int n, int k);

// All k-subsets of the given sorted pool, lexicographic.
std::vector<Subset> CombinationsOf(const Subset& pool, int k);

// Every subset of [1..n] of size at least min_size, ordered by size then
// lexicographically.
std::vector<Subset> SubsetsAtLeast(int n, int min_size);

bool Contains(const Subset& s, int x);
bool Intersects(const Subset& a, const Subset& b);
bool IsSubsetOf(const Subset& inner, const Subset& outer);
// Number of elements of s strictly smaller than x.
int CountBelow(const Subset& s, int x);
// (s \ {remove}) ∪ {add}, sorted.
Subset Replace(const Subset& s, int remove, int add);
Subset Range(int first, int last);

// "1,2,3"; the inverse accepts the same form (whitespace tolerated).
std::string SubsetKey(const Subset& s);
Subset ParseSubset(const std::string& text);

// Throws Error(kInvalidArgument) unless s is strictly increasing within
// [1..n].
void ValidateSubset(const Subset& s, int n, const char* what);

}  // namespace gsa

#endif  // GSA_COMBINATORICS_H_
