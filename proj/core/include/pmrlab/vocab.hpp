// Copyright 2026 The pmrlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PMRLAB_VOCAB_HPP_
#define PMRLAB_VOCAB_HPP_

#include <array>
#include <string_view>

namespace pmrlab {

using Token = int;

// Fixed 34-token vocabulary. The ids are part of the on-disk contract:
// datasets store questions as id lists and the policy's embedding and
// output rows are indexed by them. Never reorder.
inline constexpr Token kPad = 0;
inline constexpr Token kSos = 1;
inline constexpr Token kQuestionMark = 2;
inline constexpr Token kYes = 3;
inline constexpr Token kNo = 4;
inline constexpr Token kInvalid = 5;
inline constexpr Token kIs = 6;
inline constexpr Token kIt = 7;
inline constexpr Token kSlotDigit = 8;
inline constexpr Token kSlotColor = 9;
inline constexpr Token kSlotBgcolor = 10;
inline constexpr Token kSlotStyle = 11;
inline constexpr Token kDigitBase = 12;    // zero..nine -> 12..21
inline constexpr Token kColorBase = 22;    // red blue green purple brown
inline constexpr Token kBgcolorBase = 27;  // cyan yellow white silver salmon
inline constexpr Token kStyleBase = 32;    // flat stroke
inline constexpr int kVocabSize = 34;

inline constexpr int kNumDigits = 10;
inline constexpr int kNumColors = 5;
inline constexpr int kNumBgcolors = 5;
inline constexpr int kNumStyles = 2;

// One indicator per attribute value of one cell: 10 + 5 + 5 + 2.
inline constexpr int kCellIndicators =
    kNumDigits + kNumColors + kNumBgcolors + kNumStyles;
inline constexpr int kGridCells = 9;
// Multi-hot context the policy conditions on: 9 cells x 22 indicators.
inline constexpr int kContextDim = kGridCells * kCellIndicators;

constexpr bool token_in_vocab(Token t) { return t >= 0 && t < kVocabSize; }

inline const std::array<std::string_view, kVocabSize>& token_names() {
  static const std::array<std::string_view, kVocabSize> names = {
      "<pad>",  "<sos>",  "?",      "<yes>",   "<no>",   "<invalid>",
      "is",     "it",     "digit",  "color",   "bgcolor", "style",
      "zero",   "one",    "two",    "three",   "four",   "five",
      "six",    "seven",  "eight",  "nine",    "red",    "blue",
      "green",  "purple", "brown",  "cyan",    "yellow", "white",
      "silver", "salmon", "flat",   "stroke"};
  return names;
}

inline std::string_view token_name(Token t) {
  return token_in_vocab(t) ? token_names()[static_cast<size_t>(t)]
                           : std::string_view("<oov>");
}

}  // namespace pmrlab

#endif  // PMRLAB_VOCAB_HPP_
