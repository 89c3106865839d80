// Copyright 2026 The quatcomp Authors.
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


#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quatcomp/mask.hpp"

namespace quatcomp {

/// Each position goes missing independently with probability p.
struct RandomPattern {
  double p = 0.5;
  std::uint64_t seed = 0;
};

/// Axis-aligned missing rectangle; (x, y) is the top-left column and row.
struct BlockPattern {
  Index x = 0;
  Index y = 0;
  Index width = 0;
  Index height = 0;
};

/// Missing equilateral triangle pointing up. The apex sits on the top edge of
/// pixel (apex_row, apex_col), horizontally centred in that column; the base
/// is horizontal, `base` pixels wide, base * sqrt(3) / 2 rows below the apex.
/// A pixel is missing when its centre lies inside the triangle.
struct TrianglePattern {
  Index apex_row = 0;
  Index apex_col = 0;
  double base = 0.0;
};

/// Missing pixels with |row - center_row| + |col - center_col| <= half_diagonal.
struct DiamondPattern {
  Index center_row = 0;
  Index center_col = 0;
  Index half_diagonal = 0;
};

using MaskPattern = std::variant<RandomPattern, BlockPattern, TrianglePattern, DiamondPattern>;

/// Throws PreconditionError when the geometry leaves the grid or p is outside [0, 1].
Mask make_mask(const MaskPattern& pattern, Index rows, Index cols);

/// A position is missing if any pattern marks it missing.
Mask make_mask(std::span<const MaskPattern> patterns, Index rows, Index cols);

/// Text form, e.g. "random:p=0.5:seed=7", "block:x=10:y=20:w=30:h=40",
/// "triangle:row=5:col=50:base=40", "diamond:row=30:col=30:half=10".
/// Several patterns are joined with '+'. A random pattern without a seed
/// takes `default_seed`; with no default the seed is required.
std::vector<MaskPattern> parse_patterns(std::string_view text,
                                        std::optional<std::uint64_t> default_seed = std::nullopt);
MaskPattern parse_pattern(std::string_view text, std::optional<std::uint64_t> default_seed = std::nullopt);
std::string to_string(const MaskPattern& pattern);
std::string to_string(std::span<const MaskPattern> patterns);

/// 1-bit grayscale PNG, white = observed, black = missing. Reading accepts
/// any PNG and thresholds the gray value at 128.
void write_mask_png(const std::filesystem::path& path, const Mask& mask);
Mask read_mask_png(const std::filesystem::path& path);

/// {"rows": M, "cols": N, "missing": [[i, j], ...]}
std::string mask_to_json(const Mask& mask);
Mask mask_from_json(std::string_view text);
void write_mask_json(const std::filesystem::path& path, const Mask& mask);
Mask read_mask_json(const std::filesystem::path& path);

/// Dispatches on the extension (.png or .json).
Mask read_mask(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const Mask& mask);

}  // namespace quatcomp
