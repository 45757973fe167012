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

#include "gsa/combinatorics.h"

#include <algorithm>
#include <sstream>

#include "gsa/error.h"

namespace gsa {

int64_t Binomial(int64_t n, int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  int64_t result = 1;
  for (int64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

std::vector<Subset> CombinationsOf(const Subset& pool, int k) {
  std::vector<Subset> out;
  const int n = static_cast<int>(pool.size());
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    Subset s(k);
    for (int i = 0; i < k; ++i) s[i] = pool[idx[i]];
    out.push_back(std::move(s));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<Subset> Combinations(int n, int k) {
  return CombinationsOf(Range(1, n), k);
}

std::vector<Subset> SubsetsAtLeast(int n, int min_size) {
  std::vector<Subset> out;
  for (int size = std::max(min_size, 0); size <= n; ++size) {
    for (Subset& s : Combinations(n, size)) out.push_back(std::move(s));
  }
  return out;
}

bool Contains(const Subset& s, int x) {
  return std::binary_search(s.begin(), s.end(), x);
}

bool Intersects(const Subset& a, const Subset& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

bool IsSubsetOf(const Subset& inner, const Subset& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

int CountBelow(const Subset& s, int x) {
  return static_cast<int>(std::lower_bound(s.begin(), s.end(), x) - s.begin());
}

Subset Replace(const Subset& s, int remove, int add) {
  Subset out;
  out.reserve(s.size());
  for (int v : s) {
    if (v != remove) out.push_back(v);
  }
  out.insert(std::lower_bound(out.begin(), out.end(), add), add);
  return out;
}

Subset Range(int first, int last) {
  Subset out;
  for (int i = first; i <= last; ++i) out.push_back(i);
  return out;
}

std::string SubsetKey(const Subset& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

Subset ParseSubset(const std::string& text) {
  Subset out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    token.erase(std::remove_if(token.begin(), token.end(), ::isspace),
                token.end());
    if (token.empty()) continue;
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw Error(ErrorCode::kInvalidArgument, "bad id '" + token + "'");
    }
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ValidateSubset(const Subset& s, int n, const char* what) {
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 1 || s[i] > n || (i > 0 && s[i] <= s[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " {" + SubsetKey(s) +
                      "} is not a set of distinct ids in [1," +
                      std::to_string(n) + "]");
    }
  }
}

}  // namespace gsa
