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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "gsa/error.h"
#include "gsa/rng.h"
#include "gsa/verify.h"

namespace gsa {
namespace {

struct Entropy {
  int64_t exact = 0;  // log_q of the support size
  double shannon = 0;
};

// Entropy of the empirical distribution given by `codes` (sorted in place),
// in q-ary units. Requires a uniform distribution over q^e values.
Entropy UniformEntropy(std::vector<uint64_t>& codes, Residue q, const char* what) {
  std::sort(codes.begin(), codes.end());
  const double n = static_cast<double>(codes.size());
  uint64_t first_count = 0;
  uint64_t support = 0;
  double h = 0;
  for (size_t i = 0; i < codes.size();) {
    size_t j = i;
    while (j < codes.size() && codes[j] == codes[i]) ++j;
    const uint64_t c = j - i;
    if (first_count == 0) first_count = c;
    if (c != first_count) {
      throw Error(ErrorCode::kTraceMismatch,
                  std::string(what) + " is not uniform over its support");
    }
    const double pr = c / n;
    h -= pr * std::log(pr);
    ++support;
    i = j;
  }
  Entropy e;
  e.shannon = h / std::log(static_cast<double>(q));
  uint64_t power = 1;
  while (power < support) {
    power *= q;
    ++e.exact;
  }
  if (power != support) {
    throw Error(ErrorCode::kTraceMismatch,
                std::string(what) + " support is not a power of q");
  }
  return e;
}

uint64_t IntPow(uint64_t base, uint64_t exp) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<uint64_t>::max() / base) {
      return std::numeric_limits<uint64_t>::max();
    }
    r *= base;
  }
  return r;
}

// Writes index `idx` as base-q digits into `out`.
void Digits(uint64_t idx, Residue q, std::span<Residue> out) {
  for (Residue& d : out) {
    d = static_cast<Residue>(idx % q);
    idx /= q;
  }
}

}  // namespace

uint64_t EnumerationStates(const SchemeParams& p) {
  const uint64_t vars = p.users() * p.input_length() + p.num_groups() * p.key_len();
  return IntPow(p.modulus(), vars);
}

MiResult BruteForceMi(const CoefficientFamily& family, const UserMatrixSet& ums,
                      const Subset& u1, const Sabotage& sabotage) {
  const SchemeParams& p = family.params();
  const Residue q = p.modulus();
  const int K = p.users();
  const int64_t L = p.input_length();
  const uint64_t states = EnumerationStates(p);
  if (states > kMaxEnumerationStates) {
    throw Error(ErrorCode::kTooLargeToEnumerate,
                p.ToString() + " needs more than 2^26 enumeration states");
  }
  ValidateSubset(u1, K, "U1");
  if (u1.size() < static_cast<size_t>(p.min_survivors())) {
    throw Error(ErrorCode::kTooFewSurvivors, "|U1| < U");
  }
  const size_t n_view = K * p.round1_symbols() + u1.size() * p.round2_symbols();
  const int bits = std::bit_width(q - 1);
  if ((n_view + L) * bits > 64) {
    throw Error(ErrorCode::kTooLargeToEnumerate, "view does not pack into 64 bits");
  }
  const uint64_t n_w = IntPow(q, K * L);
  const uint64_t n_z = states / n_w;

  std::vector<InputVector> inputs(K);
  auto set_inputs = [&](uint64_t idx) {
    std::vector<Residue> all(K * L);
    Digits(idx, q, all);
    for (int k = 0; k < K; ++k) {
      inputs[k].owner = k + 1;
      inputs[k].symbols.assign(all.begin() + k * L, all.begin() + (k + 1) * L);
    }
  };
  auto keys_for = [&](uint64_t idx) {
    KeyMaterial keys = KeyMaterial::Zero(p);
    for (size_t g = 0; g < family.groups().size(); ++g) {
      auto key = keys.MutableKey(g);
      for (Residue& d : key) {
        d = static_cast<Residue>(idx % q);
        idx /= q;
      }
    }
    return keys;
  };

  // The view is linear in (w, z), so it is the sum of its input part and its
  // key part. The split is checked on random samples below.
  const KeyMaterial zero_keys = KeyMaterial::Zero(p);
  std::vector<std::vector<Residue>> by_w(n_w), by_z(n_z);
  std::vector<uint64_t> sum_codes(n_w);
  for (uint64_t w = 0; w < n_w; ++w) {
    set_inputs(w);
    by_w[w] = ConcreteView(family, ums, zero_keys, inputs, u1, sabotage);
    const std::vector<Residue> sum = DirectSum(p, inputs, u1);
    uint64_t code = 0;
    for (Residue s : sum) code = (code << bits) | s;
    sum_codes[w] = code;
  }
  set_inputs(0);
  for (uint64_t z = 0; z < n_z; ++z) {
    by_z[z] = ConcreteView(family, ums, keys_for(z), inputs, u1, sabotage);
  }
  const PrimeField& f = p.field();
  Rng rng(0, Stream::kGeneric, 0x4d49);
  for (int s = 0; s < 16; ++s) {
    const uint64_t w = rng.Uniform(n_w), z = rng.Uniform(n_z);
    set_inputs(w);
    const std::vector<Residue> full =
        ConcreteView(family, ums, keys_for(z), inputs, u1, sabotage);
    for (size_t i = 0; i < n_view; ++i) {
      if (full[i] != f.Add(by_w[w][i], by_z[z][i])) {
        throw Error(ErrorCode::kTraceMismatch, "encoders are not linear");
      }
    }
  }

  auto view_code = [&](uint64_t w, uint64_t z) {
    uint64_t code = 0;
    for (size_t i = 0; i < n_view; ++i) {
      code = (code << bits) | f.Add(by_w[w][i], by_z[z][i]);
    }
    return code;
  };

  // H(view | W): average over w of the entropy of the view given w.
  Rational h_view_given_w = Rational::Of(0, 1);
  double h_view_given_w_shannon = 0;
  std::vector<uint64_t> codes(n_z);
  for (uint64_t w = 0; w < n_w; ++w) {
    for (uint64_t z = 0; z < n_z; ++z) codes[z] = view_code(w, z);
    const Entropy e = UniformEntropy(codes, q, "view given W");
    h_view_given_w = h_view_given_w + Rational::Of(e.exact, static_cast<int64_t>(n_w));
    h_view_given_w_shannon += e.shannon / n_w;
  }

  // H(sum): the sum depends on w only and every w carries n_z states.
  std::vector<uint64_t> sums = sum_codes;
  const Entropy h_sum = UniformEntropy(sums, q, "sum");

  // H(view, sum) over all states.
  codes.assign(states, 0);
  size_t at = 0;
  for (uint64_t w = 0; w < n_w; ++w) {
    for (uint64_t z = 0; z < n_z; ++z) {
      codes[at++] = (view_code(w, z) << (L * bits)) | sum_codes[w];
    }
  }
  const Entropy h_joint = UniformEntropy(codes, q, "(view, sum)");

  MiResult r;
  r.states = states;
  r.info = Rational::Of(h_joint.exact - h_sum.exact, 1) - h_view_given_w;
  r.shannon = h_joint.shannon - h_sum.shannon - h_view_given_w_shannon;
  return r;
}

}  // namespace gsa
