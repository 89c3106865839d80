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
#include <vector>

#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

/// 8-bit RGB image, row-major, three interleaved channels.
struct RgbImage {
  Index height = 0;
  Index width = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(Index h, Index w) : height(h), width(w), pixels(static_cast<std::size_t>(h * w * 3), 0) {}

  std::uint8_t& at(Index row, Index col, int channel) {
    return pixels[static_cast<std::size_t>((row * width + col) * 3 + channel)];
  }
  std::uint8_t at(Index row, Index col, int channel) const {
    return pixels[static_cast<std::size_t>((row * width + col) * 3 + channel)];
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Pure quaternion encoding: R -> i, G -> j, B -> k, real part zero.
QMatrix encode(const RgbImage& image);

/// Inverse of encode. Each imaginary plane is clamped to [0, 255] and rounded
/// to the nearest integer; the real plane is ignored.
RgbImage decode(const QMatrix& q);

/// Reads an 8-bit RGB PNG or a binary PPM (P6, maxval 255), chosen by the
/// file signature. Throws FormatError for anything else.
RgbImage read_image(const std::filesystem::path& path);

/// Writes PNG or PPM depending on the extension (.png / .ppm).
void write_image(const std::filesystem::path& path, const RgbImage& image);

RgbImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

}  // namespace quatcomp
