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

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "quatcomp/errors.hpp"
#include "quatcomp/image.hpp"

namespace quatcomp {

namespace {

std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v));
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

void check_writable(const RgbImage& image) {
  if (image.height <= 0 || image.width <= 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.height * image.width * 3)) {
    throw DimensionError("image: pixel buffer does not match its dimensions");
  }
}

}  // namespace

QMatrix encode(const RgbImage& image) {
  if (image.pixels.size() != static_cast<std::size_t>(image.height * image.width * 3)) {
    throw DimensionError("encode: pixel buffer does not match its dimensions");
  }
  QMatrix q(image.height, image.width);
  for (Index r = 0; r < image.height; ++r) {
    for (Index c = 0; c < image.width; ++c) {
      for (int ch = 0; ch < 3; ++ch) q.plane(ch + 1)(r, c) = image.at(r, c, ch);
    }
  }
  return q;
}

RgbImage decode(const QMatrix& q) {
  RgbImage image(q.rows(), q.cols());
  for (Index r = 0; r < q.rows(); ++r) {
    for (Index c = 0; c < q.cols(); ++c) {
      for (int ch = 0; ch < 3; ++ch) image.at(r, c, ch) = to_byte(q.plane(ch + 1)(r, c));
    }
  }
  return image;
}

RgbImage read_png(const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str())) {
    std::string msg = img.message;
    png_image_free(&img);
    throw FormatError("read_png: " + path.string() + ": " + msg);
  }
  if (img.format != PNG_FORMAT_RGB) {
    png_image_free(&img);
    throw FormatError("read_png: " + path.string() + " is not an 8-bit RGB image");
  }
  RgbImage out(static_cast<Index>(img.height), static_cast<Index>(img.width));
  if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw FormatError("read_png: " + path.string() + ": " + msg);
  }
  return out;
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
  check_writable(image);
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.string().c_str(), 0, image.pixels.data(), 0, nullptr)) {
    throw std::runtime_error("write_png: " + path.string() + ": " + img.message);
  }
}

namespace {

// Next header token of a PPM, skipping whitespace and comments.
std::string ppm_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  while (c != EOF && !std::isspace(c) && c != '#') {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (c == '#') in.unget();
  return tok;
}

long parse_positive(const std::string& tok, const std::filesystem::path& path) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }) ||
      tok.size() > 9) {
    throw FormatError("read_ppm: " + path.string() + ": malformed header");
  }
  return std::stol(tok);
}

}  // namespace

RgbImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("read_ppm: cannot open " + path.string());
  if (ppm_token(in) != "P6") throw FormatError("read_ppm: " + path.string() + " is not a binary PPM");
  const long w = parse_positive(ppm_token(in), path);
  const long h = parse_positive(ppm_token(in), path);
  const long maxval = parse_positive(ppm_token(in), path);
  if (w <= 0 || h <= 0) throw FormatError("read_ppm: " + path.string() + ": empty image");
  if (maxval != 255) throw FormatError("read_ppm: " + path.string() + ": only 8-bit PPM is supported");
  RgbImage out(h, w);
  in.read(reinterpret_cast<char*>(out.pixels.data()), static_cast<std::streamsize>(out.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(out.pixels.size())) {
    throw FormatError("read_ppm: " + path.string() + ": truncated pixel data");
  }
  return out;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
  check_writable(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_ppm: cannot open " + path.string());
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw std::runtime_error("write_ppm: write failed for " + path.string());
}

RgbImage read_image(const std::filesystem::path& path) {
  std::array<unsigned char, 8> sig{};
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("read_image: cannot open " + path.string());
    in.read(reinterpret_cast<char*>(sig.data()), sig.size());
    if (in.gcount() < 2) throw FormatError("read_image: " + path.string() + " is too short");
  }
  if (png_sig_cmp(sig.data(), 0, sig.size()) == 0) return read_png(path);
  if (sig[0] == 'P' && sig[1] == '6') return read_ppm(path);
  throw FormatError("read_image: " + path.string() + " is neither PNG nor binary PPM");
}

void write_image(const std::filesystem::path& path, const RgbImage& image) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_png(path, image);
  } else if (ext == ".ppm") {
    write_ppm(path, image);
  } else {
    throw FormatError("write_image: unsupported extension '" + ext + "'");
  }
}

}  // namespace quatcomp
