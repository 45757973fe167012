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

#include <gtest/gtest.h>

#include <cstdlib>
#include <vector>

#include "gsa/error.h"
#include "gsa/field.h"
#include "gsa/rng.h"
#include "gsa/simd/kernels.h"

namespace gsa {
namespace {

TEST(FieldTest, RejectsCompositeAndOversizedModuli) {
  EXPECT_THROW(PrimeField{1}, Error);
  EXPECT_THROW(PrimeField{15}, Error);
  EXPECT_THROW(PrimeField{4294967291u}, Error);  // prime, but >= 2^31
  EXPECT_NO_THROW(PrimeField{2});
  EXPECT_NO_THROW(PrimeField{kDefaultModulus});
}

TEST(FieldTest, ArithmeticMatchesWideIntegers) {
  for (Residue q : {2u, 7u, 11u, 251u, 65537u, kDefaultModulus}) {
    const PrimeField f(q);
    Rng rng(q);
    for (int i = 0; i < 2000; ++i) {
      const uint64_t a = rng.Uniform(q), b = rng.Uniform(q);
      EXPECT_EQ(f.Add(a, b), (a + b) % q);
      EXPECT_EQ(f.Sub(a, b), (a + q - b) % q);
      EXPECT_EQ(f.Mul(a, b), a * b % q);
      if (a != 0) EXPECT_EQ(f.Mul(a, f.Inv(a)), 1u);
    }
    EXPECT_THROW(f.Inv(0), Error);
  }
}

TEST(FieldTest, FromSignedAndSign) {
  const PrimeField f(7);
  EXPECT_EQ(f.FromSigned(-1), 6u);
  EXPECT_EQ(f.FromSigned(-15), 6u);
  EXPECT_EQ(f.FromSigned(16), 2u);
  EXPECT_EQ(f.Sign(0), 1u);
  EXPECT_EQ(f.Sign(3), 6u);
  EXPECT_EQ(f.Pow(3, 6), 1u);  // Fermat
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42, Stream::kKeys, 3), b(42, Stream::kKeys, 3), c(42, Stream::kInputs, 3);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const uint64_t x = a.Next();
    EXPECT_EQ(x, b.Next());
    differs = differs || x != c.Next();
  }
  EXPECT_TRUE(differs);
}

TEST(RngTest, UniformStaysInRange) {
  Rng rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) ++hist[rng.Uniform(7)];
  for (int h : hist) EXPECT_GT(h, 800);
}

// Every accelerated variant must reproduce the scalar reference bit for bit,
// including the tails that do not fill a vector register.
class KernelEquivalenceTest : public ::testing::TestWithParam<Residue> {};

TEST_P(KernelEquivalenceTest, Avx2MatchesScalar) {
  const simd::KernelTable* fast = simd::Avx2Kernels();
  if (fast == nullptr) GTEST_SKIP() << "no AVX2 on this machine";
  const simd::KernelTable& ref = simd::ScalarKernels();
  const Residue q = GetParam();
  Rng rng(q, Stream::kGeneric, 9);
  for (size_t n : {0, 1, 3, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1027}) {
    std::vector<Residue> src(n), dst(n);
    rng.Fill(src, q);
    rng.Fill(dst, q);
    std::vector<Residue> coeffs = {0, 1, q - 1, static_cast<Residue>(rng.Uniform(q))};
    for (Residue c : coeffs) {
      auto a = dst, b = dst;
      ref.axpy(a.data(), src.data(), n, c, q);
      fast->axpy(b.data(), src.data(), n, c, q);
      EXPECT_EQ(a, b) << "axpy n=" << n << " c=" << c;
      a = dst, b = dst;
      ref.scale(a.data(), n, c, q);
      fast->scale(b.data(), n, c, q);
      EXPECT_EQ(a, b) << "scale n=" << n << " c=" << c;
    }
    auto a = dst, b = dst;
    ref.add(a.data(), src.data(), n, q);
    fast->add(b.data(), src.data(), n, q);
    EXPECT_EQ(a, b) << "add n=" << n;
    a = dst, b = dst;
    ref.sub(a.data(), src.data(), n, q);
    fast->sub(b.data(), src.data(), n, q);
    EXPECT_EQ(a, b) << "sub n=" << n;
  }
}

TEST_P(KernelEquivalenceTest, ExtremeValues) {
  const simd::KernelTable* fast = simd::Avx2Kernels();
  if (fast == nullptr) GTEST_SKIP() << "no AVX2 on this machine";
  const Residue q = GetParam();
  std::vector<Residue> src(37, q - 1), dst(37, q - 1);
  auto a = dst, b = dst;
  simd::ScalarKernels().axpy(a.data(), src.data(), src.size(), q - 1, q);
  fast->axpy(b.data(), src.data(), src.size(), q - 1, q);
  EXPECT_EQ(a, b);
  const uint64_t expect = (uint64_t{q - 1} + uint64_t{q - 1} * (q - 1)) % q;
  EXPECT_EQ(a[0], expect);
}

INSTANTIATE_TEST_SUITE_P(Moduli, KernelEquivalenceTest,
                         ::testing::Values(2u, 7u, 11u, 251u, 65537u, 1000000007u,
                                           kDefaultModulus));

TEST(KernelDispatchTest, EnvironmentForcesScalar) {
  // ActiveKernels caches its choice, so only check the name is one we ship.
  const std::string_view name = simd::ActiveKernels().name;
  EXPECT_TRUE(name == "scalar" || name == "avx2") << name;
  if (const char* env = std::getenv("GSA_SIMD"); env && std::string_view(env) == "scalar") {
    EXPECT_EQ(name, "scalar");
  }
}

}  // namespace
}  // namespace gsa
