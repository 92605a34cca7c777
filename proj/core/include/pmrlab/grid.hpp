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

#ifndef PMRLAB_GRID_HPP_
#define PMRLAB_GRID_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "pmrlab/rng.hpp"
#include "pmrlab/vocab.hpp"

namespace pmrlab {

enum class AttributeSlot { kDigit, kColor, kBgcolor, kStyle };

inline constexpr std::array<AttributeSlot, 4> kAllSlots = {
    AttributeSlot::kDigit, AttributeSlot::kColor, AttributeSlot::kBgcolor,
    AttributeSlot::kStyle};

int slot_domain_size(AttributeSlot slot);

// The question word naming a slot (digit/color/bgcolor/style).
Token slot_token(AttributeSlot slot);
std::optional<AttributeSlot> slot_from_token(Token t);

// The vocabulary token for value v of a slot; v must be in the slot domain.
Token value_token(AttributeSlot slot, int value);
// Inverse; nullopt when the token is not a value of that slot.
std::optional<int> value_from_token(AttributeSlot slot, Token t);

std::string_view slot_name(AttributeSlot slot);
std::string_view slot_value_name(AttributeSlot slot, int value);
// Inverse of slot_value_name; nullopt for unknown names.
std::optional<int> slot_value_from_name(AttributeSlot slot,
                                        std::string_view name);

// One cell of the 3x3 grid. Attribute values index their domain tables
// (color 0 = red, bgcolor 0 = cyan, style 0 = flat).
struct Cell {
  int digit = 0;    // 0..9
  int color = 0;    // red blue green purple brown
  int bgcolor = 0;  // cyan yellow white silver salmon
  int style = 0;    // flat stroke

  int attribute(AttributeSlot slot) const;

  // Unique id of the attribute combination, in [0, 500).
  uint16_t code() const {
    return static_cast<uint16_t>(((digit * kNumColors + color) * kNumBgcolors +
                                  bgcolor) *
                                     kNumStyles +
                                 style);
  }

  bool operator==(const Cell&) const = default;
};

// Row-major 3x3 arrangement; cell index = 3*row + col.
struct GridImage {
  std::array<Cell, kGridCells> cells;

  // Dedupe key covering every attribute of every cell.
  std::array<uint16_t, kGridCells> key() const;

  bool operator==(const GridImage&) const = default;
};

// Samples every attribute of every cell independently and uniformly.
// Consumes exactly 36 draws in cell order, (digit, color, bgcolor, style)
// within a cell; the draw order is part of the reproducibility contract.
GridImage generate_grid(Rng& rng);

// Indices of the active context indicators, 4 per cell in row-major cell
// order. The context layout is 22 indicators per cell: 10 digit, then 5
// color, 5 bgcolor, 2 style.
std::array<int, 4 * kGridCells> context_active_indices(const GridImage& grid);

}  // namespace pmrlab

#endif  // PMRLAB_GRID_HPP_
