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

#include <charconv>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"
#include "quatcomp/errors.hpp"
#include "quatcomp/mask_pattern.hpp"

namespace quatcomp {

namespace {

constexpr double kSqrt3Over2 = 0.86602540378443864676;

void check_grid(Index rows, Index cols) {
  if (rows <= 0 || cols <= 0) throw PreconditionError("make_mask: grid must be nonempty");
}

void apply(const RandomPattern& p, Mask& mask) {
  if (!(p.p >= 0.0 && p.p <= 1.0)) throw PreconditionError("random pattern: p must lie in [0, 1]");
  std::mt19937_64 gen(p.seed);
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      if (u < p.p) mask.set_observed(i, j, false);
    }
  }
}

void apply(const BlockPattern& b, Mask& mask) {
  if (b.x < 0 || b.y < 0 || b.width <= 0 || b.height <= 0 || b.x + b.width > mask.cols() ||
      b.y + b.height > mask.rows()) {
    throw PreconditionError("block pattern: rectangle leaves the grid");
  }
  for (Index j = b.x; j < b.x + b.width; ++j) {
    for (Index i = b.y; i < b.y + b.height; ++i) mask.set_observed(i, j, false);
  }
}

void apply(const TrianglePattern& t, Mask& mask) {
  const double height = t.base * kSqrt3Over2;
  const double cx = static_cast<double>(t.apex_col) + 0.5;
  const double top = static_cast<double>(t.apex_row);
  if (!(t.base > 0.0) || !std::isfinite(t.base) || t.apex_row < 0 || t.apex_col < 0 ||
      top + height > static_cast<double>(mask.rows()) || cx - t.base / 2 < 0.0 ||
      cx + t.base / 2 > static_cast<double>(mask.cols())) {
    throw PreconditionError("triangle pattern: triangle leaves the grid");
  }
  for (Index i = t.apex_row; i < mask.rows(); ++i) {
    const double depth = static_cast<double>(i) + 0.5 - top;
    if (depth > height) break;
    const double half = depth / height * t.base / 2;
    for (Index j = 0; j < mask.cols(); ++j) {
      if (std::abs(static_cast<double>(j) + 0.5 - cx) <= half) mask.set_observed(i, j, false);
    }
  }
}

void apply(const DiamondPattern& d, Mask& mask) {
  if (d.half_diagonal < 0 || d.center_row - d.half_diagonal < 0 || d.center_col - d.half_diagonal < 0 ||
      d.center_row + d.half_diagonal >= mask.rows() || d.center_col + d.half_diagonal >= mask.cols()) {
    throw PreconditionError("diamond pattern: diamond leaves the grid");
  }
  for (Index i = d.center_row - d.half_diagonal; i <= d.center_row + d.half_diagonal; ++i) {
    const Index reach = d.half_diagonal - std::abs(i - d.center_row);
    for (Index j = d.center_col - reach; j <= d.center_col + reach; ++j) mask.set_observed(i, j, false);
  }
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw PreconditionError("pattern: bad value '" + std::string(s) + "' for " + std::string(what));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// Collects key=value fields and checks that exactly `keys` are present.
class Fields {
 public:
  Fields(std::string_view kind, const std::vector<std::string_view>& parts,
         std::initializer_list<std::string_view> keys, std::initializer_list<std::string_view> optional = {})
      : kind_(kind) {
    for (std::size_t n = 1; n < parts.size(); ++n) {
      const std::size_t eq = parts[n].find('=');
      if (eq == std::string_view::npos) fail("expected key=value, got '" + std::string(parts[n]) + "'");
      const std::string_view key = parts[n].substr(0, eq);
      bool known = false;
      for (auto k : keys) known = known || k == key;
      for (auto k : optional) known = known || k == key;
      if (!known) fail("unknown key '" + std::string(key) + "'");
      for (const auto& kv : kv_) {
        if (kv.first == key) fail("duplicate key '" + std::string(key) + "'");
      }
      kv_.emplace_back(key, parts[n].substr(eq + 1));
    }
    for (auto k : keys) get(k);
  }

  bool has(std::string_view key) const {
    for (const auto& kv : kv_) {
      if (kv.first == key) return true;
    }
    return false;
  }

  std::string_view get(std::string_view key) const {
    for (const auto& kv : kv_) {
      if (kv.first == key) return kv.second;
    }
    fail("missing key '" + std::string(key) + "'");
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw PreconditionError(std::string(kind_) + " pattern: " + why);
  }

  std::string_view kind_;
  std::vector<std::pair<std::string_view, std::string_view>> kv_;
};

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Mask make_mask(const MaskPattern& pattern, Index rows, Index cols) {
  check_grid(rows, cols);
  Mask mask(rows, cols, true);
  std::visit([&](const auto& p) { apply(p, mask); }, pattern);
  return mask;
}

Mask make_mask(std::span<const MaskPattern> patterns, Index rows, Index cols) {
  check_grid(rows, cols);
  Mask mask(rows, cols, true);
  for (const auto& pattern : patterns) std::visit([&](const auto& p) { apply(p, mask); }, pattern);
  return mask;
}

MaskPattern parse_pattern(std::string_view text, std::optional<std::uint64_t> default_seed) {
  const auto parts = split(text, ':');
  const std::string_view kind = parts.front();
  if (kind == "random") {
    Fields f(kind, parts, {"p"}, {"seed"});
    RandomPattern r{parse_number<double>(f.get("p"), "p"), 0};
    if (f.has("seed")) {
      r.seed = parse_number<std::uint64_t>(f.get("seed"), "seed");
    } else if (default_seed) {
      r.seed = *default_seed;
    } else {
      throw PreconditionError("random pattern: missing key 'seed'");
    }
    return r;
  }
  if (kind == "block") {
    Fields f(kind, parts, {"x", "y", "w", "h"});
    return BlockPattern{parse_number<Index>(f.get("x"), "x"), parse_number<Index>(f.get("y"), "y"),
                        parse_number<Index>(f.get("w"), "w"), parse_number<Index>(f.get("h"), "h")};
  }
  if (kind == "triangle") {
    Fields f(kind, parts, {"row", "col", "base"});
    return TrianglePattern{parse_number<Index>(f.get("row"), "row"), parse_number<Index>(f.get("col"), "col"),
                           parse_number<double>(f.get("base"), "base")};
  }
  if (kind == "diamond") {
    Fields f(kind, parts, {"row", "col", "half"});
    return DiamondPattern{parse_number<Index>(f.get("row"), "row"), parse_number<Index>(f.get("col"), "col"),
                          parse_number<Index>(f.get("half"), "half")};
  }
  throw PreconditionError("pattern: unknown kind '" + std::string(kind) + "'");
}

std::vector<MaskPattern> parse_patterns(std::string_view text, std::optional<std::uint64_t> default_seed) {
  std::vector<MaskPattern> out;
  for (auto part : split(text, '+')) out.push_back(parse_pattern(part, default_seed));
  return out;
}

std::string to_string(const MaskPattern& pattern) {
  struct Printer {
    std::string operator()(const RandomPattern& p) const {
      return "random:p=" + fmt_double(p.p) + ":seed=" + std::to_string(p.seed);
    }
    std::string operator()(const BlockPattern& b) const {
      return "block:x=" + std::to_string(b.x) + ":y=" + std::to_string(b.y) + ":w=" + std::to_string(b.width) +
             ":h=" + std::to_string(b.height);
    }
    std::string operator()(const TrianglePattern& t) const {
      return "triangle:row=" + std::to_string(t.apex_row) + ":col=" + std::to_string(t.apex_col) +
             ":base=" + fmt_double(t.base);
    }
    std::string operator()(const DiamondPattern& d) const {
      return "diamond:row=" + std::to_string(d.center_row) + ":col=" + std::to_string(d.center_col) +
             ":half=" + std::to_string(d.half_diagonal);
    }
  };
  return std::visit(Printer{}, pattern);
}

std::string to_string(std::span<const MaskPattern> patterns) {
  std::string out;
  for (const auto& p : patterns) {
    if (!out.empty()) out += '+';
    out += to_string(p);
  }
  return out;
}

namespace {

struct PngWriteState {
  std::FILE* file = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteState() {
    if (png != nullptr) png_destroy_write_struct(&png, info != nullptr ? &info : nullptr);
    if (file != nullptr) std::fclose(file);
  }
};

// Returns false when libpng reports an error. Kept free of objects with
// destructors so the longjmp out of libpng is well defined.
bool write_rows(PngWriteState& st, png_uint_32 width, png_uint_32 height, png_bytep* rows) {
  if (setjmp(png_jmpbuf(st.png))) return false;
  png_init_io(st.png, st.file);
  png_set_IHDR(st.png, st.info, width, height, 1, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(st.png, st.info);
  png_write_image(st.png, rows);
  png_write_end(st.png, nullptr);
  return true;
}

}  // namespace

void write_mask_png(const std::filesystem::path& path, const Mask& mask) {
  if (mask.rows() <= 0 || mask.cols() <= 0) throw DimensionError("write_mask_png: empty mask");
  const std::size_t stride = static_cast<std::size_t>((mask.cols() + 7) / 8);
  std::vector<png_byte> buffer(stride * static_cast<std::size_t>(mask.rows()), 0);
  std::vector<png_bytep> rows(static_cast<std::size_t>(mask.rows()));
  for (Index i = 0; i < mask.rows(); ++i) {
    png_bytep row = buffer.data() + static_cast<std::size_t>(i) * stride;
    rows[static_cast<std::size_t>(i)] = row;
    for (Index j = 0; j < mask.cols(); ++j) {
      if (mask.observed(i, j)) row[j / 8] |= static_cast<png_byte>(0x80u >> (j % 8));
    }
  }

  PngWriteState st;
  st.file = std::fopen(path.string().c_str(), "wb");
  if (st.file == nullptr) throw std::runtime_error("write_mask_png: cannot open " + path.string());
  st.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (st.png == nullptr) throw std::runtime_error("write_mask_png: libpng initialisation failed");
  st.info = png_create_info_struct(st.png);
  if (st.info == nullptr) throw std::runtime_error("write_mask_png: libpng initialisation failed");
  if (!write_rows(st, static_cast<png_uint_32>(mask.cols()), static_cast<png_uint_32>(mask.rows()),
                  rows.data())) {
    throw std::runtime_error("write_mask_png: libpng failed writing " + path.string());
  }
}

Mask read_mask_png(const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str())) {
    std::string msg = img.message;
    png_image_free(&img);
    throw FormatError("read_mask_png: " + path.string() + ": " + msg);
  }
  img.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> gray(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, gray.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw FormatError("read_mask_png: " + path.string() + ": " + msg);
  }
  const Index rows = img.height;
  const Index cols = img.width;
  Mask mask(rows, cols, true);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      mask.set_observed(i, j, gray[static_cast<std::size_t>(i * cols + j)] >= 128);
    }
  }
  return mask;
}

std::string mask_to_json(const Mask& mask) {
  nlohmann::json missing = nlohmann::json::array();
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j) {
      if (!mask.observed(i, j)) missing.push_back({i, j});
    }
  }
  nlohmann::json doc{{"rows", mask.rows()}, {"cols", mask.cols()}, {"missing", std::move(missing)}};
  return doc.dump() + "\n";
}

Mask mask_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("mask json: ") + e.what());
  }
  try {
    const Index rows = doc.at("rows").get<Index>();
    const Index cols = doc.at("cols").get<Index>();
    if (rows <= 0 || cols <= 0) throw FormatError("mask json: rows and cols must be positive");
    Mask mask(rows, cols, true);
    for (const auto& entry : doc.at("missing")) {
      if (!entry.is_array() || entry.size() != 2) throw FormatError("mask json: entries must be [i, j]");
      const Index i = entry[0].get<Index>();
      const Index j = entry[1].get<Index>();
      if (i < 0 || i >= rows || j < 0 || j >= cols) throw FormatError("mask json: entry out of range");
      mask.set_observed(i, j, false);
    }
    return mask;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("mask json: ") + e.what());
  }
}

void write_mask_json(const std::filesystem::path& path, const Mask& mask) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_mask_json: cannot open " + path.string());
  out << mask_to_json(mask);
  if (!out) throw std::runtime_error("write_mask_json: write failed for " + path.string());
}

Mask read_mask_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("read_mask_json: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return mask_from_json(ss.str());
}

Mask read_mask(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".png" || ext == ".PNG") return read_mask_png(path);
  if (ext == ".json" || ext == ".JSON") return read_mask_json(path);
  throw FormatError("read_mask: unsupported extension '" + ext + "'");
}

void write_mask(const std::filesystem::path& path, const Mask& mask) {
  const std::string ext = path.extension().string();
  if (ext == ".png" || ext == ".PNG") {
    write_mask_png(path, mask);
  } else if (ext == ".json" || ext == ".JSON") {
    write_mask_json(path, mask);
  } else {
    throw FormatError("write_mask: unsupported extension '" + ext + "'");
  }
}

}  // namespace quatcomp
