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

#include "gsa/error.h"
#include "gsa/rng.h"
#include "gsa/scheme.h"
#include "gsa/transcript_io.h"
#include "test_util.h"

namespace gsa {
namespace {

using testing::ExampleFamily;
using testing::ExampleParams;
using testing::ExampleUserMatrices;
using testing::NaiveSum;

std::vector<std::vector<Residue>> Symbols(const std::vector<InputVector>& inputs) {
  std::vector<std::vector<Residue>> out;
  for (const auto& in : inputs) out.push_back(in.symbols);
  return out;
}

struct ExampleScheme {
  SchemeParams p;
  CoefficientFamily family;
  UserMatrixSet ums;
  explicit ExampleScheme(int64_t length = 10)
      : p(ExampleParams(length)), family(ExampleFamily(p)), ums(ExampleUserMatrices(p)) {}
};

TEST(KeyMaterialTest, SizesAndDeterminism) {
  const SchemeParams p = ExampleParams(10);
  const KeyMaterial a = KeyMaterial::Generate(p, 9), b = KeyMaterial::Generate(p, 9);
  ASSERT_EQ(a.groups().size(), 10u);
  for (size_t g = 0; g < 10; ++g) {
    EXPECT_EQ(a.Key(g).size(), 6u);
    EXPECT_TRUE(std::equal(a.Key(g).begin(), a.Key(g).end(), b.Key(g).begin()));
  }
  // Sub-keys partition the key in member order.
  const size_t g = 0;  // {1,2,3}
  EXPECT_EQ(a.SubKey(g, 1).data(), a.Key(g).data());
  EXPECT_EQ(a.SubKey(g, 2).data(), a.Key(g).data() + 2);
  EXPECT_EQ(a.SubKey(g, 3).data(), a.Key(g).data() + 4);
  EXPECT_THROW(a.SubKey(g, 4), Error);
  const KeyMaterial mine = a.ForUser(4);
  EXPECT_FALSE(mine.Has(0));
  EXPECT_TRUE(mine.Has(a.groups().size() - 1));  // {3,4,5}
  EXPECT_EQ(KeyMaterial::Generate(SchemeParams::Create(4, 2, 2, 7, 4), 1).Key(0).size(), 4u);
}

TEST(Round1Test, ZeroKeysLeaveInputsInTheClear) {
  ExampleScheme ex;
  const KeyMaterial zero = KeyMaterial::Zero(ex.p);
  const auto inputs = RandomInputs(ex.p, 1);
  for (const InputVector& in : inputs) {
    const Round1Message m = Round1Encode(ex.p, ex.family, zero, in);
    ASSERT_EQ(m.symbols.size(), 12u);
    EXPECT_TRUE(std::equal(in.symbols.begin(), in.symbols.end(), m.symbols.begin()));
    EXPECT_TRUE(std::all_of(m.symbols.begin() + 10, m.symbols.end(),
                            [](Residue r) { return r == 0; }));
  }
}

TEST(Round1Test, LastBlockCarriesNoInput) {
  ExampleScheme ex;
  const KeyMaterial keys = KeyMaterial::Generate(ex.p, 4);
  InputVector a{2, std::vector<Residue>(10, 0)}, b{2, std::vector<Residue>(10, 0)};
  Rng(5).Fill(b.symbols, ex.p.modulus());
  const auto xa = Round1Encode(ex.p, ex.family, keys, a);
  const auto xb = Round1Encode(ex.p, ex.family, keys, b);
  EXPECT_TRUE(std::equal(xa.symbols.begin() + 10, xa.symbols.end(), xb.symbols.begin() + 10));
}

TEST(Round1Test, BlockEquationHoldsSymbolBySymbol) {
  ExampleScheme ex;
  const PrimeField& f = ex.p.field();
  const KeyMaterial keys = KeyMaterial::Generate(ex.p, 2);
  const auto inputs = RandomInputs(ex.p, 3);
  for (const InputVector& in : inputs) {
    const Round1Message m = Round1Encode(ex.p, ex.family, keys, in);
    for (int64_t j = 0; j < 6; ++j) {
      for (int64_t t = 0; t < 2; ++t) {
        Residue expect = j < 5 ? in.symbols[j * 2 + t] : 0;
        for (size_t g : ex.family.GroupsContaining(in.owner)) {
          expect = f.Add(expect, f.Mul(ex.family.Coefficient(g, j), keys.SubKey(g, in.owner)[t]));
        }
        EXPECT_EQ(m.symbols[j * 2 + t], expect);
      }
    }
  }
}

TEST(Round1Test, RejectsWrongLength) {
  ExampleScheme ex;
  InputVector in{1, std::vector<Residue>(9, 0)};
  try {
    Round1Encode(ex.p, ex.family, KeyMaterial::Zero(ex.p), in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(AggregateTest, KnownEntriesOfWorkedExample) {
  ExampleScheme ex;
  const KeyMaterial keys = KeyMaterial::Generate(ex.p, 1);
  std::vector<Round1Message> msgs;
  for (const auto& in : RandomInputs(ex.p, 2)) {
    msgs.push_back(Round1Encode(ex.p, ex.family, keys.ForUser(in.owner), in));
  }
  const Round1Aggregate agg = ServerRound1Aggregate(ex.p, msgs);
  ASSERT_EQ(agg.known_f.size(), 2u);
  EXPECT_EQ(agg.known_f[0].first, 5u);   // F_6
  EXPECT_EQ(agg.known_f[1].first, 11u);  // F_12
  EXPECT_EQ(agg.masked_sums.size(), 10u);
  msgs.resize(1);
  try {
    ServerRound1Aggregate(ex.p, msgs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewSurvivors);
  }
}

TEST(AggregateTest, ZeroKeysGivePiecewiseSums) {
  ExampleScheme ex;
  const auto inputs = RandomInputs(ex.p, 8);
  std::vector<Round1Message> msgs;
  for (const auto& in : inputs) {
    msgs.push_back(Round1Encode(ex.p, ex.family, KeyMaterial::Zero(ex.p), in));
  }
  const Round1Aggregate agg = ServerRound1Aggregate(ex.p, msgs);
  EXPECT_EQ(agg.masked_sums, NaiveSum(Symbols(inputs), {1, 2, 3, 4, 5}, ex.p.modulus()));
}

TEST(AggregateTest, NoKnownEntriesWhenGroupsExceedDropouts) {
  const SchemeParams p = SchemeParams::Create(5, 4, 3, kDefaultModulus, 24);
  const ValidatedScheme v = BuildValidated(p, 1, 10);
  const KeyMaterial keys = KeyMaterial::Generate(p, 1);
  std::vector<Round1Message> msgs;
  for (const auto& in : RandomInputs(p, 2)) {
    msgs.push_back(Round1Encode(p, v.family, keys, in));
  }
  EXPECT_TRUE(ServerRound1Aggregate(p, msgs).known_f.empty());
}

TEST(CodedKeysTest, DroppedMembersAreLeftOut) {
  const SchemeParams p = ExampleParams(20);
  const PrimeField& f = p.field();
  const KeyMaterial keys = KeyMaterial::Generate(p, 6);
  const CodedKeys coded(p, keys, {1, 2, 3, 4});
  const size_t g = 2;  // {1,2,5}
  ASSERT_EQ(keys.groups()[g], (Subset{1, 2, 5}));
  for (int64_t t = 0; t < p.subkey_len(); ++t) {
    EXPECT_EQ(coded.Sum(g)[t], f.Add(keys.SubKey(g, 1)[t], keys.SubKey(g, 2)[t]));
  }
  EXPECT_EQ(coded.Block(g, 0).size(), 2u);  // L/10
  EXPECT_EQ(coded.Block(g, 1).data(), coded.Sum(g).data() + 2);
}

TEST(Round2Test, MatchesReferenceMatrixTimesTarget) {
  ExampleScheme ex(10);
  const KeyMaterial keys = KeyMaterial::Generate(ex.p, 12);
  const Subset u1 = {1, 2, 3, 4, 5};
  const FieldMatrix target = EvaluateTarget(ex.p, ex.family, CodedKeys(ex.p, keys, u1));
  const Round2Message y = Round2Encode(ex.p, ex.family, ex.ums, keys.ForUser(1), 1, u1);
  const FieldMatrix s1 = testing::SignedMatrix(testing::kExampleS[0], ex.p.field());
  const FieldMatrix expect = Multiply(s1, target);
  EXPECT_TRUE(std::equal(y.symbols.begin(), y.symbols.end(), expect.data().begin()));
  EXPECT_EQ(y.symbols.size(), 5u);
}

TEST(Round2Test, PartialKnowledgeEqualsFullKnowledge) {
  ExampleScheme ex(20);
  const auto u1s = SubsetsAtLeast(5, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const KeyMaterial keys = KeyMaterial::Generate(ex.p, 1000 + trial);
    const Subset& u1 = u1s[trial % u1s.size()];
    const int k = u1[trial % u1.size()];
    const Round2Message own = Round2Encode(ex.p, ex.family, ex.ums, keys.ForUser(k), k, u1);
    const Round2Message full = Round2EncodeFullKnowledge(ex.p, ex.family, ex.ums, keys, k, u1);
    EXPECT_EQ(own.symbols, full.symbols) << "trial " << trial;
  }
}

TEST(Round2Test, ZeroMatrixGivesZeroMessage) {
  ExampleScheme ex;
  ex.ums.SetS(2, FieldMatrix(5, 12, ex.p.field()));
  const KeyMaterial keys = KeyMaterial::Generate(ex.p, 3);
  const Round2Message y = Round2Encode(ex.p, ex.family, ex.ums, keys.ForUser(2), 2, {1, 2, 3});
  EXPECT_TRUE(std::all_of(y.symbols.begin(), y.symbols.end(), [](Residue r) { return r == 0; }));
}

TEST(Round2Test, RejectsNonSurvivors) {
  ExampleScheme ex;
  const KeyMaterial keys = KeyMaterial::Generate(ex.p, 3);
  try {
    Round2Encode(ex.p, ex.family, ex.ums, keys.ForUser(5), 5, {1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotASurvivor);
  }
  try {
    Round2Encode(ex.p, ex.family, ex.ums, keys.ForUser(1), 1, {1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewSurvivors);
  }
}

TEST(DecodeTest, WorkedExampleEveryPairOfSecondRoundSurvivors) {
  ExampleScheme ex(20);
  const KeyMaterial keys = KeyMaterial::Generate(ex.p, 21);
  const auto inputs = RandomInputs(ex.p, 22);
  for (const Subset& u1 : {Subset{1, 2, 3, 4, 5}, Subset{1, 2, 3, 4}}) {
    for (const Subset& u2 : CombinationsOf(u1, 2)) {
      const Transcript t = Simulate(ex.family, ex.ums, keys, inputs, u1, u2);
      ASSERT_TRUE(t.decoded) << t.failure;
      EXPECT_EQ(*t.decoded, NaiveSum(Symbols(inputs), u1, ex.p.modulus()))
          << "U1={" << SubsetKey(u1) << "} U2={" << SubsetKey(u2) << "}";
    }
  }
}

TEST(DecodeTest, AllZeroInputsDecodeToZero) {
  ExampleScheme ex;
  std::vector<InputVector> inputs;
  for (int k = 1; k <= 5; ++k) inputs.push_back({k, std::vector<Residue>(10, 0)});
  const Transcript t =
      Simulate(ex.family, ex.ums, KeyMaterial::Generate(ex.p, 1), inputs, {1, 2, 3}, {2, 3});
  ASSERT_TRUE(t.decoded);
  EXPECT_EQ(*t.decoded, std::vector<Residue>(10, 0));
}

TEST(DecodeTest, ResultIndependentOfChosenSubset) {
  const SchemeParams p = SchemeParams::Create(6, 3, 3, kDefaultModulus, 54);
  const ValidatedScheme v = BuildValidated(p, 2, 10);
  const KeyMaterial keys = KeyMaterial::Generate(p, 5);
  const auto inputs = RandomInputs(p, 6);
  const Subset u1 = {1, 2, 3, 4, 5, 6};
  std::vector<Round1Message> r1;
  std::vector<Round2Message> r2;
  for (const auto& in : inputs) r1.push_back(Round1Encode(p, v.family, keys.ForUser(in.owner), in));
  for (int k : u1) r2.push_back(Round2Encode(p, v.family, v.ums, keys.ForUser(k), k, u1));
  const Round1Aggregate agg = ServerRound1Aggregate(p, r1);
  const std::vector<Residue> expect = NaiveSum(Symbols(inputs), u1, p.modulus());
  for (const Subset& chosen : Combinations(6, 3)) {
    std::vector<Round2Message> subset;
    for (int k : chosen) subset.push_back(r2[k - 1]);
    EXPECT_EQ(ServerDecode(p, v.family, v.ums, agg, subset), expect) << SubsetKey(chosen);
  }
}

TEST(DecodeTest, TooFewSecondRoundMessages) {
  ExampleScheme ex;
  const KeyMaterial keys = KeyMaterial::Generate(ex.p, 1);
  const auto inputs = RandomInputs(ex.p, 1);
  std::vector<Round1Message> r1;
  for (const auto& in : inputs) r1.push_back(Round1Encode(ex.p, ex.family, keys, in));
  const Round1Aggregate agg = ServerRound1Aggregate(ex.p, r1);
  std::vector<Round2Message> r2 = {
      Round2Encode(ex.p, ex.family, ex.ums, keys.ForUser(1), 1, agg.survivors)};
  try {
    ServerDecode(ex.p, ex.family, ex.ums, agg, r2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewSurvivors);
  }
}

TEST(DecodeTest, SingularSystemIsReported) {
  ExampleScheme ex;
  FieldMatrix s = ex.ums.S(1);
  std::copy(s.Row(0).begin(), s.Row(0).end(), s.Row(1).begin());
  ex.ums.SetS(1, s);
  const Transcript t = Simulate(ex.family, ex.ums, KeyMaterial::Generate(ex.p, 1),
                                RandomInputs(ex.p, 1), {1, 2, 3, 4, 5}, {1, 2});
  EXPECT_FALSE(t.decoded);
  EXPECT_NE(t.failure.find("SingularDecodeMatrix"), std::string::npos) << t.failure;
}

struct RateShape {
  int users, survivors, group;
  int64_t r1_num, r1_den;
};

class RateEqualityTest : public ::testing::TestWithParam<RateShape> {};

TEST_P(RateEqualityTest, MessageSizesMeetTheRates) {
  const RateShape s = GetParam();
  const int64_t unit = SchemeParams::MinInputLength(s.users, s.survivors, s.group);
  const SchemeParams p = SchemeParams::Create(s.users, s.survivors, s.group, kDefaultModulus, 3 * unit);
  EXPECT_EQ(p.rates().round1, Rational::Of(s.r1_num, s.r1_den));
  const ValidatedScheme v = BuildValidated(p, 4, 20);
  const KeyMaterial keys = KeyMaterial::Generate(p, 1);
  const auto inputs = RandomInputs(p, 1);
  const int64_t L = p.input_length();
  for (const Subset& u1 : SubsetsAtLeast(p.users(), p.min_survivors())) {
    const Transcript t = Simulate(v.family, v.ums, keys, inputs, u1,
                                  Subset(u1.begin(), u1.begin() + p.min_survivors()));
    for (const auto& m : t.round1) {
      EXPECT_EQ(Rational::Of(static_cast<int64_t>(m.symbols.size()), L), p.rates().round1);
    }
    for (const auto& m : t.round2) {
      EXPECT_EQ(Rational::Of(static_cast<int64_t>(m.symbols.size()), L), p.rates().round2);
    }
    ASSERT_TRUE(t.decoded);
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, RateEqualityTest,
                         ::testing::Values(RateShape{5, 2, 3, 6, 5}, RateShape{4, 2, 2, 3, 2},
                                           RateShape{6, 3, 2, 5, 3}, RateShape{6, 5, 3, 1, 1}));

TEST(TranscriptIoTest, RoundTrip) {
  ExampleScheme ex(20);
  Transcript t = Simulate(ex.family, ex.ums, KeyMaterial::Generate(ex.p, 2),
                          RandomInputs(ex.p, 3), {1, 2, 4, 5}, {2, 5});
  t.key_seed = 2;
  t.input_seed = 3;
  const Transcript back = TranscriptFromJson(nlohmann::json::parse(TranscriptToJson(t).dump()));
  EXPECT_EQ(back.u1, t.u1);
  EXPECT_EQ(back.u2, t.u2);
  EXPECT_EQ(back.key_seed, 2u);
  ASSERT_EQ(back.round1.size(), 5u);
  EXPECT_EQ(back.round1[3].symbols, t.round1[3].symbols);
  EXPECT_EQ(back.round2[1].symbols, t.round2[1].symbols);
  EXPECT_EQ(back.decoded, t.decoded);
  EXPECT_EQ(DecodeTranscript(ex.family, ex.ums, back), *t.decoded);
}

TEST(TranscriptIoTest, HexIsLittleEndian) {
  EXPECT_EQ(EncodeSymbolsHex(std::vector<Residue>{1, 0x01020304}), "0100000004030201");
  EXPECT_EQ(DecodeSymbolsHex("0100000004030201", kDefaultModulus),
            (std::vector<Residue>{1, 0x01020304}));
  EXPECT_THROW(DecodeSymbolsHex("010000", 7), Error);
  EXPECT_THROW(DecodeSymbolsHex("07000000", 7), Error);
  EXPECT_THROW(DecodeSymbolsHex("0g000000", 7), Error);
}

}  // namespace
}  // namespace gsa
