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

#ifndef GSA_NET_WIRE_H_
#define GSA_NET_WIRE_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gsa/field.h"

namespace gsa::net {

// Frame: "GSA1" | type (1 byte) | user id (u16 BE) | payload_len (u32 BE) |
// payload.
enum class FrameType : uint8_t {
  kHello = 1,
  kRound1 = 2,
  kSurvivors = 3,
  kRound2 = 4,
  kResult = 5,
  kError = 6,
};

const char* FrameTypeName(FrameType type);

inline constexpr std::array<uint8_t, 4> kMagic = {'G', 'S', 'A', '1'};
inline constexpr size_t kHeaderSize = 11;

struct FrameHeader {
  FrameType type = FrameType::kError;
  uint16_t user_id = 0;
  uint32_t payload_len = 0;
};

struct Frame {
  FrameType type = FrameType::kError;
  uint16_t user_id = 0;
  std::vector<uint8_t> payload;
};

std::array<uint8_t, kHeaderSize> EncodeHeader(const FrameHeader& h);
// Throws Error(kProtocolViolation) on a bad magic or unknown type.
FrameHeader DecodeHeader(std::span<const uint8_t, kHeaderSize> bytes);
std::vector<uint8_t> EncodeFrame(const Frame& frame);

// Residues as 4-byte little-endian words, or one byte each when q <= 251.
enum class SymbolPacking : uint8_t { kWord = 0, kByte = 1 };

inline size_t SymbolWidth(SymbolPacking p) {
  return p == SymbolPacking::kByte ? 1 : 4;
}
bool BytePackingAllowed(Residue q);
std::vector<uint8_t> PackSymbols(std::span<const Residue> symbols,
                                 SymbolPacking packing);
// Throws Error(kProtocolViolation) on a ragged length or a symbol >= q.
std::vector<Residue> UnpackSymbols(std::span<const uint8_t> bytes,
                                   SymbolPacking packing, Residue q);

// HELLO payload: version (1) | requested/granted packing (1) |
// fixture checksum (u64 BE).
struct Hello {
  uint8_t version = 1;
  SymbolPacking packing = SymbolPacking::kWord;
  uint64_t fixture_checksum = 0;
};
std::vector<uint8_t> EncodeHello(const Hello& h);
Hello DecodeHello(std::span<const uint8_t> bytes);

// SURVIVORS payload: ascending u16 BE user ids.
std::vector<uint8_t> EncodeSurvivors(const std::vector<int>& ids);
std::vector<int> DecodeSurvivors(std::span<const uint8_t> bytes);

}  // namespace gsa::net

#endif  // GSA_NET_WIRE_H_
