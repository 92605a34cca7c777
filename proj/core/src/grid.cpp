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

#include "pmrlab/grid.hpp"

#include <cassert>

namespace pmrlab {

int slot_domain_size(AttributeSlot slot) {
  switch (slot) {
    case AttributeSlot::kDigit:
      return kNumDigits;
    case AttributeSlot::kColor:
      return kNumColors;
    case AttributeSlot::kBgcolor:
      return kNumBgcolors;
    case AttributeSlot::kStyle:
      return kNumStyles;
  }
  return 0;
}

Token slot_token(AttributeSlot slot) {
  switch (slot) {
    case AttributeSlot::kDigit:
      return kSlotDigit;
    case AttributeSlot::kColor:
      return kSlotColor;
    case AttributeSlot::kBgcolor:
      return kSlotBgcolor;
    case AttributeSlot::kStyle:
      return kSlotStyle;
  }
  return kInvalid;
}

std::optional<AttributeSlot> slot_from_token(Token t) {
  switch (t) {
    case kSlotDigit:
      return AttributeSlot::kDigit;
    case kSlotColor:
      return AttributeSlot::kColor;
    case kSlotBgcolor:
      return AttributeSlot::kBgcolor;
    case kSlotStyle:
      return AttributeSlot::kStyle;
    default:
      return std::nullopt;
  }
}

namespace {

Token value_base(AttributeSlot slot) {
  switch (slot) {
    case AttributeSlot::kDigit:
      return kDigitBase;
    case AttributeSlot::kColor:
      return kColorBase;
    case AttributeSlot::kBgcolor:
      return kBgcolorBase;
    case AttributeSlot::kStyle:
      return kStyleBase;
  }
  return kInvalid;
}

}  // namespace

Token value_token(AttributeSlot slot, int value) {
  assert(value >= 0 && value < slot_domain_size(slot));
  return value_base(slot) + value;
}

std::optional<int> value_from_token(AttributeSlot slot, Token t) {
  Token base = value_base(slot);
  if (t >= base && t < base + slot_domain_size(slot)) return t - base;
  return std::nullopt;
}

std::string_view slot_name(AttributeSlot slot) {
  return token_name(slot_token(slot));
}

std::string_view slot_value_name(AttributeSlot slot, int value) {
  return token_name(value_token(slot, value));
}

std::optional<int> slot_value_from_name(AttributeSlot slot,
                                        std::string_view name) {
  for (int v = 0; v < slot_domain_size(slot); ++v) {
    if (slot_value_name(slot, v) == name) return v;
  }
  return std::nullopt;
}

int Cell::attribute(AttributeSlot slot) const {
  switch (slot) {
    case AttributeSlot::kDigit:
      return digit;
    case AttributeSlot::kColor:
      return color;
    case AttributeSlot::kBgcolor:
      return bgcolor;
    case AttributeSlot::kStyle:
      return style;
  }
  return 0;
}

std::array<uint16_t, kGridCells> GridImage::key() const {
  std::array<uint16_t, kGridCells> k{};
  for (int i = 0; i < kGridCells; ++i) k[static_cast<size_t>(i)] = cells[static_cast<size_t>(i)].code();
  return k;
}

GridImage generate_grid(Rng& rng) {
  GridImage g;
  for (auto& cell : g.cells) {
    cell.digit = static_cast<int>(rng.uniform(kNumDigits));
    cell.color = static_cast<int>(rng.uniform(kNumColors));
    cell.bgcolor = static_cast<int>(rng.uniform(kNumBgcolors));
    cell.style = static_cast<int>(rng.uniform(kNumStyles));
  }
  return g;
}

std::array<int, 4 * kGridCells> context_active_indices(const GridImage& grid) {
  std::array<int, 4 * kGridCells> idx{};
  int k = 0;
  for (int i = 0; i < kGridCells; ++i) {
    const Cell& c = grid.cells[static_cast<size_t>(i)];
    int base = i * kCellIndicators;
    idx[static_cast<size_t>(k++)] = base + c.digit;
    idx[static_cast<size_t>(k++)] = base + kNumDigits + c.color;
    idx[static_cast<size_t>(k++)] = base + kNumDigits + kNumColors + c.bgcolor;
    idx[static_cast<size_t>(k++)] =
        base + kNumDigits + kNumColors + kNumBgcolors + c.style;
  }
  return idx;
}

}  // namespace pmrlab
