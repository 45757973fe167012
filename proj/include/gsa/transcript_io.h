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

#ifndef GSA_TRANSCRIPT_IO_H_
#define GSA_TRANSCRIPT_IO_H_

#include <span>
#include <string>
#include <vector>

#include "gsa/scheme.h"
#include "json.hpp"

namespace gsa {

// Symbol blocks travel as hex strings of 4-byte little-endian residues.
//   {"format": "gsa-transcript/1", "params": {...},
//    "seeds": {"fixture": .., "keys": .., "inputs": ..},
//    "U1": [..], "U2": [..],
//    "round1": [{"sender": k, "symbols": "hex"}, ...],
//    "round2": [{"sender": k, "symbols": "hex"}, ...],
//    "decoded": "hex" | null, "failure": ".."}
std::string EncodeSymbolsHex(std::span<const Residue> symbols);
// Throws Error(kFormat) on odd lengths, bad digits or residues >= q.
std::vector<Residue> DecodeSymbolsHex(const std::string& hex, Residue q);

nlohmann::json TranscriptToJson(const Transcript& t);
Transcript TranscriptFromJson(const nlohmann::json& j);

}  // namespace gsa

#endif  // GSA_TRANSCRIPT_IO_H_
