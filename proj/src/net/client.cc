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

#include "gsa/net/client.h"

#include "gsa/transcript_io.h"

namespace gsa::net {

using nlohmann::json;

namespace {

// Waits for a frame of type `want`; an ERROR frame from the server ends the
// session.
Frame Expect(Socket& s, FrameType want, Clock::time_point deadline,
             uint32_t max_payload) {
  std::optional<Frame> f = ReadFrame(s, deadline, max_payload);
  if (!f) {
    throw Error(ErrorCode::kConnectionLost,
                std::string("timed out waiting for ") + FrameTypeName(want));
  }
  if (f->type == FrameType::kError) {
    throw Error(ErrorCode::kConnectionLost,
                "server: " + std::string(f->payload.begin(), f->payload.end()));
  }
  if (f->type != want) {
    throw Error(ErrorCode::kProtocolViolation,
                std::string("expected ") + FrameTypeName(want) + ", got " +
                    FrameTypeName(f->type));
  }
  return *f;
}

}  // namespace

ClientRecord RunClient(const ClientOptions& o) {
  const SchemeParams& p = o.fixture->family.params();
  const int k = o.input.owner;
  ClientRecord rec;
  rec.user = k;
  rec.drop = o.drop;
  if (o.drop == DropAction::kAbsent) return rec;
  const uint16_t uid = static_cast<uint16_t>(k);
  const uint32_t max_payload = static_cast<uint32_t>(
      std::max<int64_t>(1 << 16, p.input_length() * 4));
  try {
    Socket s = Socket::Connect(
        o.server, Clock::now() + std::chrono::milliseconds(o.timeouts.connect_ms));
    Hello hello;
    hello.fixture_checksum = FixtureChecksum(*o.fixture);
    hello.packing = o.request_byte_packing && BytePackingAllowed(p.modulus())
                        ? SymbolPacking::kByte
                        : SymbolPacking::kWord;
    WriteFrame(s, Frame{FrameType::kHello, uid, EncodeHello(hello)});
    const Frame reply = Expect(s, FrameType::kHello,
                               Clock::now() + std::chrono::milliseconds(o.timeouts.connect_ms),
                               max_payload);
    rec.packing = DecodeHello(reply.payload).packing;

    const Round1Message x = Round1Encode(p, o.fixture->family, *o.keys, o.input);
    const std::vector<uint8_t> r1 = PackSymbols(x.symbols, rec.packing);
    rec.payload_r1 = r1.size();
    rec.bytes_r1 = WriteFrame(s, Frame{FrameType::kRound1, uid, r1});
    if (o.drop == DropAction::kAfterRound1) return rec;

    const auto wait = std::chrono::milliseconds(o.timeouts.round1_ms + o.timeouts.round2_ms +
                                                o.timeouts.result_ms);
    const Frame surv = Expect(s, FrameType::kSurvivors, Clock::now() + wait, max_payload);
    rec.survivors = DecodeSurvivors(surv.payload);
    if (o.drop == DropAction::kBeforeRound2) return rec;
    ValidateSubset(rec.survivors, p.users(), "U1");

    const Round2Message y = Round2Encode(p, o.fixture->family, o.fixture->ums, *o.keys, k,
                                         rec.survivors);
    const std::vector<uint8_t> r2 = PackSymbols(y.symbols, rec.packing);
    rec.payload_r2 = r2.size();
    rec.bytes_r2 = WriteFrame(s, Frame{FrameType::kRound2, uid, r2});

    const Frame result = Expect(s, FrameType::kResult, Clock::now() + wait, max_payload);
    rec.result = UnpackSymbols(result.payload, rec.packing, p.modulus());
    if (rec.result->size() != static_cast<size_t>(p.input_length())) {
      throw Error(ErrorCode::kProtocolViolation, "RESULT has the wrong length");
    }
  } catch (const Error& e) {
    rec.error_code = e.code();
    rec.error = e.what();
  }
  return rec;
}

json ClientRecord::ToJson() const {
  json j;
  j["user"] = user;
  j["drop"] = DropActionName(drop);
  j["packing"] = packing == SymbolPacking::kByte ? "byte" : "word";
  j["bytes_r1"] = bytes_r1;
  j["bytes_r2"] = bytes_r2;
  j["payload_r1"] = payload_r1;
  j["payload_r2"] = payload_r2;
  j["survivors"] = survivors;
  j["result"] = result ? json(EncodeSymbolsHex(*result)) : json(nullptr);
  j["error"] = error_code ? json{{"code", std::string(ErrorCodeName(*error_code))},
                                 {"message", error}}
                          : json(nullptr);
  return j;
}

}  // namespace gsa::net
