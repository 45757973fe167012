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

#include <thread>

#include "gsa/error.h"
#include "gsa/net/bench.h"
#include "gsa/net/socket.h"
#include "gsa/net/wire.h"
#include "test_util.h"

namespace gsa::net {
namespace {

TEST(WireTest, HeaderLayout) {
  const auto h = EncodeHeader({FrameType::kRound2, 0x0102, 0x0A0B0C0D});
  const std::array<uint8_t, kHeaderSize> expect = {'G', 'S', 'A', '1', 4, 0x01, 0x02,
                                                   0x0A, 0x0B, 0x0C, 0x0D};
  EXPECT_EQ(h, expect);
  const FrameHeader back = DecodeHeader(h);
  EXPECT_EQ(back.type, FrameType::kRound2);
  EXPECT_EQ(back.user_id, 0x0102);
  EXPECT_EQ(back.payload_len, 0x0A0B0C0Du);
  auto bad = h;
  bad[0] = 'X';
  EXPECT_THROW(DecodeHeader(bad), Error);
  bad = h;
  bad[4] = 9;
  EXPECT_THROW(DecodeHeader(bad), Error);
  EXPECT_EQ(EncodeFrame({FrameType::kError, 3, {'h', 'i'}}).size(), kHeaderSize + 2);
}

TEST(WireTest, SymbolPacking) {
  const std::vector<Residue> sym = {0, 6, 3, 1};
  EXPECT_EQ(PackSymbols(sym, SymbolPacking::kByte), (std::vector<uint8_t>{0, 6, 3, 1}));
  const auto words = PackSymbols(sym, SymbolPacking::kWord);
  ASSERT_EQ(words.size(), 16u);
  EXPECT_EQ(words[4], 6);
  EXPECT_EQ(words[5], 0);
  EXPECT_EQ(UnpackSymbols(words, SymbolPacking::kWord, 7), sym);
  EXPECT_EQ(UnpackSymbols(PackSymbols(sym, SymbolPacking::kByte), SymbolPacking::kByte, 7), sym);
  EXPECT_THROW(UnpackSymbols(std::vector<uint8_t>{7}, SymbolPacking::kByte, 7), Error);
  EXPECT_THROW(UnpackSymbols(std::vector<uint8_t>{1, 2, 3}, SymbolPacking::kWord, 7), Error);
  EXPECT_TRUE(BytePackingAllowed(251));
  EXPECT_FALSE(BytePackingAllowed(257));
}

TEST(WireTest, HelloAndSurvivors) {
  const Hello h{1, SymbolPacking::kByte, 0x1122334455667788ull};
  const auto bytes = EncodeHello(h);
  ASSERT_EQ(bytes.size(), 10u);
  EXPECT_EQ(bytes[2], 0x11);
  const Hello back = DecodeHello(bytes);
  EXPECT_EQ(back.fixture_checksum, h.fixture_checksum);
  EXPECT_EQ(back.packing, SymbolPacking::kByte);
  EXPECT_THROW(DecodeHello(std::vector<uint8_t>(9, 0)), Error);
  const std::vector<int> ids = {1, 3, 300};
  const auto s = EncodeSurvivors(ids);
  EXPECT_EQ(s, (std::vector<uint8_t>{0, 1, 0, 3, 1, 44}));
  EXPECT_EQ(DecodeSurvivors(s), ids);
  EXPECT_THROW(DecodeSurvivors(std::vector<uint8_t>{0, 3, 0, 1}), Error);
}

TEST(DropPlanTest, ParseAndResolve) {
  const DropPlan plan = DropPlan::Parse("2:after_round1,3:before_round2,4:absent,*:never");
  EXPECT_EQ(plan.Resolve(1, 0), DropAction::kNone);
  EXPECT_EQ(plan.Resolve(2, 0), DropAction::kAfterRound1);
  EXPECT_EQ(plan.Resolve(3, 0), DropAction::kBeforeRound2);
  EXPECT_EQ(plan.Resolve(4, 0), DropAction::kAbsent);
  EXPECT_EQ(DropPlan::Parse("").Resolve(5, 3), DropAction::kNone);
  EXPECT_THROW(DropPlan::Parse("2:sometimes"), Error);
  EXPECT_THROW(DropPlan::Parse("x:never"), Error);
  EXPECT_THROW(DropPlan::Parse("1:p=1.5"), Error);
}

TEST(DropPlanTest, ProbabilitiesAreDeterministicAndCalibrated) {
  const DropPlan all = DropPlan::Parse("*:p=1");
  EXPECT_EQ(all.Resolve(3, 11), DropAction::kAbsent);
  const DropPlan none = DropPlan::Parse("*:p=0");
  EXPECT_EQ(none.Resolve(3, 11), DropAction::kNone);
  const DropPlan half = DropPlan::Parse("*:p=0.5");
  int dropped = 0;
  for (uint64_t seed = 0; seed < 2000; ++seed) {
    EXPECT_EQ(half.Resolve(2, seed), half.Resolve(2, seed));
    dropped += half.Resolve(2, seed) != DropAction::kNone;
  }
  // P(drop) = 1 - 0.25.
  EXPECT_NEAR(dropped / 2000.0, 0.75, 0.05);
}

TEST(EndpointTest, Parse) {
  const Endpoint e = Endpoint::Parse("127.0.0.1:7000");
  EXPECT_EQ(e.port, 7000);
  EXPECT_EQ(e.ToString(), "127.0.0.1:7000");
  EXPECT_THROW(Endpoint::Parse("nowhere"), Error);
  EXPECT_THROW(Endpoint::Parse("h:99999"), Error);
}

class LoopbackTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const SchemeParams p = SchemeParams::Create(5, 2, 3, 7, 200);
    const ValidatedScheme v = BuildValidated(p, 3, 100);
    fixture_ = new std::shared_ptr<const Fixture>(
        std::make_shared<const Fixture>(Fixture{v.family, v.ums, v.attempts}));
  }
  static void TearDownTestSuite() { delete fixture_; }

  const SchemeParams& params() const { return (*fixture_)->family.params(); }
  static Timeouts Short() { return Timeouts{3000, 3000, 3000, 6000}; }

  static std::shared_ptr<const Fixture>* fixture_;
};

std::shared_ptr<const Fixture>* LoopbackTest::fixture_ = nullptr;

TEST_F(LoopbackTest, NoDropouts) {
  const KeyMaterial keys = KeyMaterial::Generate(params(), 1);
  const auto inputs = RandomInputs(params(), 2);
  const LoopbackResult r =
      RunLoopback(*fixture_, keys, inputs, DropPlan::Parse(""), 0, Short(), true);
  ASSERT_TRUE(r.server.ok()) << r.server.error;
  EXPECT_EQ(r.server.u1, Range(1, 5));
  EXPECT_EQ(*r.server.sum, DirectSum(params(), inputs, Range(1, 5)));
  for (const ClientRecord& c : r.clients) {
    ASSERT_TRUE(c.result) << c.error;
    EXPECT_EQ(*c.result, *r.server.sum);
    EXPECT_EQ(c.packing, SymbolPacking::kByte);
    EXPECT_EQ(c.bytes_r1, static_cast<size_t>(params().round1_symbols()) + kHeaderSize);
    EXPECT_EQ(c.bytes_r2, static_cast<size_t>(params().round2_symbols()) + kHeaderSize);
    EXPECT_EQ(r.server.bytes_r1.at(c.user), c.bytes_r1);
  }
}

TEST_F(LoopbackTest, WordPackingAndDropAfterRoundOne) {
  const KeyMaterial keys = KeyMaterial::Generate(params(), 4);
  const auto inputs = RandomInputs(params(), 5);
  const LoopbackResult r = RunLoopback(*fixture_, keys, inputs,
                                       DropPlan::Parse("2:after_round1,4:before_round2"), 0,
                                       Short(), false);
  ASSERT_TRUE(r.server.ok()) << r.server.error;
  EXPECT_EQ(r.server.u1, Range(1, 5));
  EXPECT_EQ(r.server.u2, (Subset{1, 3, 5}));
  EXPECT_EQ(*r.server.sum, DirectSum(params(), inputs, Range(1, 5)));
  const ClientRecord& c1 = r.clients[0];
  EXPECT_EQ(c1.packing, SymbolPacking::kWord);
  EXPECT_EQ(c1.payload_r1, static_cast<size_t>(params().round1_symbols()) * 4);
  EXPECT_FALSE(r.clients[1].result);
  EXPECT_EQ(r.clients[1].bytes_r2, 0u);

  // The live transcript replays to the same sum.
  ASSERT_TRUE(r.server.transcript);
  EXPECT_EQ(DecodeTranscript((*fixture_)->family, (*fixture_)->ums, *r.server.transcript),
            *r.server.sum);
}

TEST_F(LoopbackTest, AbsentUsersAreLeftOutOfTheSum) {
  const KeyMaterial keys = KeyMaterial::Generate(params(), 6);
  const auto inputs = RandomInputs(params(), 7);
  const LoopbackResult r = RunLoopback(*fixture_, keys, inputs, DropPlan::Parse("3:absent"), 0,
                                       Timeouts{3000, 800, 3000, 6000}, true);
  ASSERT_TRUE(r.server.ok()) << r.server.error;
  EXPECT_EQ(r.server.u1, (Subset{1, 2, 4, 5}));
  EXPECT_EQ(*r.server.sum, DirectSum(params(), inputs, {1, 2, 4, 5}));
}

TEST_F(LoopbackTest, TooFewSurvivorsIsReportedToEveryone) {
  const KeyMaterial keys = KeyMaterial::Generate(params(), 1);
  const auto inputs = RandomInputs(params(), 1);
  const LoopbackResult r = RunLoopback(*fixture_, keys, inputs,
                                       DropPlan::Parse("*:absent,1:never"), 0,
                                       Timeouts{2000, 500, 500, 3000}, true);
  EXPECT_FALSE(r.server.ok());
  ASSERT_TRUE(r.server.error_code);
  EXPECT_EQ(*r.server.error_code, ErrorCode::kTooFewSurvivors);
  EXPECT_FALSE(r.clients[0].result);
  EXPECT_NE(r.clients[0].error.find("survivor"), std::string::npos) << r.clients[0].error;
}

TEST_F(LoopbackTest, TooFewInRoundTwo) {
  const KeyMaterial keys = KeyMaterial::Generate(params(), 1);
  const auto inputs = RandomInputs(params(), 1);
  const LoopbackResult r = RunLoopback(
      *fixture_, keys, inputs,
      DropPlan::Parse("*:after_round1,1:never"), 0, Short(), true);
  EXPECT_EQ(r.server.u1.size(), 5u);
  ASSERT_TRUE(r.server.error_code);
  EXPECT_EQ(*r.server.error_code, ErrorCode::kTooFewSurvivors);
}

TEST_F(LoopbackTest, OversizedFrameIsAViolationNotACrash) {
  const KeyMaterial keys = KeyMaterial::Generate(params(), 8);
  const auto inputs = RandomInputs(params(), 9);
  Server server(ServerOptions{Endpoint{"127.0.0.1", 0}, *fixture_, Timeouts{3000, 1500, 3000, 6000}, true});
  const Endpoint at{"127.0.0.1", server.port()};
  std::optional<AggregationRecord> rec;
  std::thread run([&] { rec = server.Run(); });

  Socket rogue = Socket::Connect(at, Clock::now() + std::chrono::seconds(3));
  const auto header = EncodeHeader({FrameType::kRound1, 1, 0x7FFFFFFF});
  rogue.SendAll(header);

  std::vector<ClientRecord> clients(4);
  std::vector<std::thread> threads;
  for (int k = 2; k <= 5; ++k) {
    threads.emplace_back([&, k] {
      ClientOptions o{at, *fixture_, std::make_shared<const KeyMaterial>(keys.ForUser(k)),
                      inputs[k - 1], DropAction::kNone, true, Short()};
      clients[k - 2] = RunClient(o);
    });
  }
  for (auto& t : threads) t.join();
  run.join();
  ASSERT_TRUE(rec);
  ASSERT_TRUE(rec->ok()) << rec->error;
  EXPECT_EQ(rec->u1, (Subset{2, 3, 4, 5}));
  EXPECT_EQ(*rec->sum, DirectSum(params(), inputs, {2, 3, 4, 5}));
  ASSERT_EQ(rec->violations.size(), 1u);
  EXPECT_NE(rec->violations[0].find("ProtocolViolation"), std::string::npos);
  for (const ClientRecord& c : clients) EXPECT_TRUE(c.result) << c.error;
}

TEST_F(LoopbackTest, KeysForAnotherFixtureAreRejected) {
  const KeyMaterial keys = KeyMaterial::Generate(params(), 1);
  const uint64_t sum = FixtureChecksum(**fixture_);
  const auto j = KeyFileToJson(keys, 2, sum);
  EXPECT_EQ(j["format"], "gsa-keys/1");
  const KeyMaterial back = KeyFileFromJson(j, params(), 2, sum);
  for (size_t g : (*fixture_)->family.GroupsContaining(2)) {
    EXPECT_TRUE(std::equal(back.Key(g).begin(), back.Key(g).end(), keys.Key(g).begin()));
  }
  EXPECT_FALSE(back.Has((*fixture_)->family.GroupsAvoiding(2)[0]));
  try {
    KeyFileFromJson(j, params(), 2, sum + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
  }
}

TEST(InputFileTest, RoundTrip) {
  const SchemeParams p = SchemeParams::Create(4, 2, 2, 7, 8);
  const InputVector in = RandomInputs(p, 3)[2];
  const InputVector back = InputFileFromJson(InputFileToJson(in), p);
  EXPECT_EQ(back.owner, 3);
  EXPECT_EQ(back.symbols, in.symbols);
}

TEST(BenchTest, LengthsAndCsv) {
  // 1 KiB of byte-packed symbols for (5,2,3) rounds up to a multiple of 10.
  EXPECT_EQ(LengthForBytes(5, 2, 3, 1024, 1), 1030);
  EXPECT_EQ(LengthForBytes(5, 2, 3, 1000, 1), 1000);
  EXPECT_EQ(LengthForBytes(5, 2, 3, 1024, 4), 260);
  EXPECT_EQ(BenchCsvHeader(),
            "K,U,S,L,q,repeat,round1_ms,round2_ms,decode_ms,total_ms,bytes_r1,bytes_r2");
}

TEST(BenchTest, TrafficGrowsWithLength) {
  BenchConfig cfg;
  cfg.lengths = {100, 1000};
  cfg.repeats = 1;
  cfg.timeouts = Timeouts{3000, 3000, 3000, 6000};
  const auto rows = RunBench(cfg);
  ASSERT_EQ(rows.size(), 4u);
  std::vector<BenchRow> means;
  for (const BenchRow& r : rows) {
    EXPECT_TRUE(r.ok);
    if (r.repeat == -1) means.push_back(r);
  }
  ASSERT_EQ(means.size(), 2u);
  EXPECT_LT(means[0].bytes_r1, means[1].bytes_r1);
  EXPECT_EQ(means[1].bytes_r1, 1200u + kHeaderSize);
  EXPECT_EQ(means[1].bytes_r2, 500u + kHeaderSize);
  EXPECT_EQ(BenchCsvRow(means[0]).rfind("5,2,3,100,7,mean,", 0), 0u);
}

}  // namespace
}  // namespace gsa::net
