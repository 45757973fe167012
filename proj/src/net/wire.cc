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

#include "gsa/net/wire.h"

#include <algorithm>

#include "gsa/error.h"

namespace gsa::net {
namespace {

void PutU16(uint8_t* p, uint16_t v) {
  p[0] = static_cast<uint8_t>(v >> 8);
  p[1] = static_cast<uint8_t>(v);
}

void PutU32(uint8_t* p, uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<uint8_t>(v >> (24 - 8 * i));
}

uint16_t GetU16(const uint8_t* p) {
  return static_cast<uint16_t>((p[0] << 8) | p[1]);
}

uint32_t GetU32(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | p[i];
  return v;
}

[[noreturn]] void Violation(const std::string& what) {
  throw Error(ErrorCode::kProtocolViolation, what);
}

}  // namespace

const char* FrameTypeName(FrameType type) {
  switch (type) {
    case FrameType::kHello: return "HELLO";
    case FrameType::kRound1: return "ROUND1";
    case FrameType::kSurvivors: return "SURVIVORS";
    case FrameType::kRound2: return "ROUND2";
    case FrameType::kResult: return "RESULT";
    case FrameType::kError: return "ERROR";
  }
  return "?";
}

std::array<uint8_t, kHeaderSize> EncodeHeader(const FrameHeader& h) {
  std::array<uint8_t, kHeaderSize> out{};
  std::copy(kMagic.begin(), kMagic.end(), out.begin());
  out[4] = static_cast<uint8_t>(h.type);
  PutU16(&out[5], h.user_id);
  PutU32(&out[7], h.payload_len);
  return out;
}

FrameHeader DecodeHeader(std::span<const uint8_t, kHeaderSize> bytes) {
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    Violation("bad frame magic");
  }
  const uint8_t type = bytes[4];
  if (type < 1 || type > 6) Violation("unknown frame type " + std::to_string(type));
  return FrameHeader{static_cast<FrameType>(type), GetU16(&bytes[5]),
                     GetU32(&bytes[7])};
}

std::vector<uint8_t> EncodeFrame(const Frame& frame) {
  const auto header = EncodeHeader(
      {frame.type, frame.user_id, static_cast<uint32_t>(frame.payload.size())});
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

bool BytePackingAllowed(Residue q) { return q <= 251; }

std::vector<uint8_t> PackSymbols(std::span<const Residue> symbols,
                                 SymbolPacking packing) {
  std::vector<uint8_t> out;
  if (packing == SymbolPacking::kByte) {
    out.reserve(symbols.size());
    for (Residue v : symbols) {
      if (v > 0xff) {
        throw Error(ErrorCode::kInvalidArgument, "symbol does not fit a byte");
      }
      out.push_back(static_cast<uint8_t>(v));
    }
    return out;
  }
  out.resize(symbols.size() * 4);
  for (size_t i = 0; i < symbols.size(); ++i) {
    for (int b = 0; b < 4; ++b) {
      out[4 * i + b] = static_cast<uint8_t>(symbols[i] >> (8 * b));
    }
  }
  return out;
}

std::vector<Residue> UnpackSymbols(std::span<const uint8_t> bytes,
                                   SymbolPacking packing, Residue q) {
  const size_t width = SymbolWidth(packing);
  if (bytes.size() % width != 0) Violation("ragged symbol payload");
  std::vector<Residue> out(bytes.size() / width);
  for (size_t i = 0; i < out.size(); ++i) {
    Residue v = 0;
    for (size_t b = 0; b < width; ++b) {
      v |= static_cast<Residue>(bytes[width * i + b]) << (8 * b);
    }
    if (v >= q) Violation("symbol out of range");
    out[i] = v;
  }
  return out;
}

std::vector<uint8_t> EncodeHello(const Hello& h) {
  std::vector<uint8_t> out(10);
  out[0] = h.version;
  out[1] = static_cast<uint8_t>(h.packing);
  for (int i = 0; i < 8; ++i) {
    out[2 + i] = static_cast<uint8_t>(h.fixture_checksum >> (56 - 8 * i));
  }
  return out;
}

Hello DecodeHello(std::span<const uint8_t> bytes) {
  if (bytes.size() != 10) Violation("HELLO payload must be 10 bytes");
  if (bytes[0] != 1) Violation("unsupported protocol version");
  if (bytes[1] > 1) Violation("unknown symbol packing");
  Hello h;
  h.version = bytes[0];
  h.packing = static_cast<SymbolPacking>(bytes[1]);
  for (int i = 0; i < 8; ++i) h.fixture_checksum = (h.fixture_checksum << 8) | bytes[2 + i];
  return h;
}

std::vector<uint8_t> EncodeSurvivors(const std::vector<int>& ids) {
  std::vector<uint8_t> out(2 * ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    PutU16(&out[2 * i], static_cast<uint16_t>(ids[i]));
  }
  return out;
}

std::vector<int> DecodeSurvivors(std::span<const uint8_t> bytes) {
  if (bytes.size() % 2 != 0) Violation("ragged SURVIVORS payload");
  std::vector<int> ids;
  for (size_t i = 0; i < bytes.size(); i += 2) {
    const int id = GetU16(&bytes[i]);
    if (!ids.empty() && id <= ids.back()) Violation("SURVIVORS not ascending");
    ids.push_back(id);
  }
  return ids;
}

}  // namespace gsa::net
