// Copyright 2026 The llrkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Binary and text serialization of score matrices and keys.
//
// Binary layout (little-endian throughout):
//
//   "BXSC"                      4 bytes
//   version                     u32, currently 1
//   kind                        u8, 0 = scores, 1 = key
//   M, S                        u64 model and segment counts
//   model names, segment names  per name: u32 byte length, raw bytes
//   cells                       M*S bytes, row-major
//                                 scores: 0 invalid, 1 valid
//                                 key:    0 ignored, 1 target, 2 non-target
//   scores (kind 0 only)        M*S IEEE-754 binary64, row-major, 0.0 at
//                               invalid cells
//
// Text formats are one trial per line, tab separated:
//   model<TAB>segment<TAB>score
//   model<TAB>segment<TAB>target|nontarget
// Quality measures are one id per line followed by its values:
//   id<TAB>q1<TAB>q2...
// LF line endings, an optional trailing CR is accepted.

#ifndef LLRKIT_SCORE_IO_HPP
#define LLRKIT_SCORE_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llrkit/trial_data.hpp"

namespace llrkit {

using Bytes = std::vector<std::uint8_t>;

inline constexpr char kBinaryMagic[4] = {'B', 'X', 'S', 'C'};
inline constexpr std::uint32_t kBinaryVersion = 1;

enum class BinaryKind : std::uint8_t { Scores = 0, Key = 1 };

Bytes encode_scores(const ScoreMatrix& scores);
ScoreMatrix decode_scores(std::span<const std::uint8_t> bytes);

Bytes encode_key(const TrialKey& key);
TrialKey decode_key(std::span<const std::uint8_t> bytes);

/// True when `bytes` starts with the binary container magic.
bool has_binary_magic(std::span<const std::uint8_t> bytes);

ScoreMatrix parse_text_scores(std::istream& in);
ScoreMatrix parse_text_scores(std::string_view text);
void emit_text_scores(const ScoreMatrix& scores, std::ostream& out);
std::string emit_text_scores(const ScoreMatrix& scores);

TrialKey parse_text_key(std::istream& in);
TrialKey parse_text_key(std::string_view text);
void emit_text_key(const TrialKey& key, std::ostream& out);
std::string emit_text_key(const TrialKey& key);

QualityMeasures parse_text_quality(std::istream& in);
QualityMeasures parse_text_quality(std::string_view text);
std::string emit_text_quality(const QualityMeasures& quality);

/// Renders `x` with 17 significant digits (lossless for binary64).
std::string format_real(double x);
void append_real(std::string& out, double x);

/// Strict decimal parse of a whole field; false on junk or non-finite.
bool parse_real(std::string_view field, double& out);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
void write_file(const std::string& path, std::string_view text);

/// Loads either format, chosen by the presence of the binary magic.
ScoreMatrix load_scores(const std::string& path);
TrialKey load_key(const std::string& path);
QualityMeasures load_quality(const std::string& path);

}  // namespace llrkit

#endif  // LLRKIT_SCORE_IO_HPP
