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


#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "quatcomp/errors.hpp"
#include "quatcomp/synthetic.hpp"

namespace quatcomp {

double NormalSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

QMatrix random_qmatrix(Index rows, Index cols, NormalSource& rng) {
  QMatrix q(rows, cols);
  for (int p = 0; p < 4; ++p) {
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) q.plane(p)(i, j) = rng.next();
    }
  }
  return q;
}

QMatrix random_qmatrix(Index rows, Index cols, std::uint64_t seed) {
  NormalSource rng(seed);
  return random_qmatrix(rows, cols, rng);
}

namespace {

constexpr std::string_view kPrefix = "synth:";

template <typename T>
T parse_field(std::string_view s, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw PreconditionError("synthetic descriptor: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

bool is_synthetic_descriptor(std::string_view text) { return text.starts_with(kPrefix); }

SyntheticSpec parse_synthetic(std::string_view text) {
  if (!is_synthetic_descriptor(text)) throw PreconditionError("synthetic descriptor must start with 'synth:'");
  text.remove_prefix(kPrefix.size());
  SyntheticSpec spec;
  bool have_rank = false;
  std::size_t field = 0;
  while (!text.empty() || field == 0) {
    const std::size_t colon = text.find(':');
    const std::string_view part = text.substr(0, colon);
    text = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (field++ == 0) {
      const std::size_t x = part.find('x');
      if (x == std::string_view::npos) throw PreconditionError("synthetic descriptor: expected MxN");
      spec.rows = parse_field<Index>(part.substr(0, x), "rows");
      spec.cols = parse_field<Index>(part.substr(x + 1), "cols");
      continue;
    }
    const std::size_t eq = part.find('=');
    if (eq == std::string_view::npos) throw PreconditionError("synthetic descriptor: expected key=value");
    const std::string_view key = part.substr(0, eq);
    const std::string_view value = part.substr(eq + 1);
    if (key == "rank") {
      spec.rank = parse_field<Index>(value, "rank");
      have_rank = true;
    } else if (key == "scale") {
      spec.scale = parse_field<double>(value, "scale");
    } else if (key == "seed") {
      spec.seed = parse_field<std::uint64_t>(value, "seed");
    } else {
      throw PreconditionError("synthetic descriptor: unknown key '" + std::string(key) + "'");
    }
  }
  if (spec.rows <= 0 || spec.cols <= 0) throw PreconditionError("synthetic descriptor: dimensions must be positive");
  if (!have_rank || spec.rank < 1 || spec.rank > std::min(spec.rows, spec.cols)) {
    throw PreconditionError("synthetic descriptor: rank must lie in [1, min(M, N)]");
  }
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
    throw PreconditionError("synthetic descriptor: scale must be positive");
  }
  return spec;
}

std::string to_string(const SyntheticSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << kPrefix << spec.rows << 'x' << spec.cols << ":rank=" << spec.rank << ":scale=" << spec.scale
     << ":seed=" << spec.seed;
  return os.str();
}

QMatrix make_low_rank(const SyntheticSpec& spec) {
  NormalSource rng(spec.seed);
  const QMatrix u = random_qmatrix(spec.rows, spec.rank, rng);
  const QMatrix v = random_qmatrix(spec.cols, spec.rank, rng);
  QMatrix x = u * conj_transpose(v);
  const double rms = x.frobenius_norm() / std::sqrt(static_cast<double>(x.size()));
  x *= spec.scale / rms;
  return x;
}

RgbImage make_test_image(Index height, Index width, std::uint64_t seed) {
  if (height <= 0 || width <= 0) throw PreconditionError("make_test_image: dimensions must be positive");
  NormalSource rng(seed);
  struct Wave {
    double fy, fx, phase, amp;
  };
  std::vector<std::vector<Wave>> waves(3);
  std::vector<double> base(3), gy(3), gx(3);
  for (int ch = 0; ch < 3; ++ch) {
    base[ch] = 70.0 + 110.0 * rng.uniform();
    gy[ch] = 60.0 * (rng.uniform() - 0.5);
    gx[ch] = 60.0 * (rng.uniform() - 0.5);
    for (int k = 0; k < 4; ++k) {
      waves[ch].push_back({0.5 + 2.5 * rng.uniform(), 0.5 + 2.5 * rng.uniform(),
                           2.0 * std::numbers::pi * rng.uniform(), 12.0 + 18.0 * rng.uniform()});
    }
  }
  struct Shape {
    bool disc;
    double cy, cx, ry, rx;
    double color[3];
  };
  std::vector<Shape> shapes;
  for (int s = 0; s < 5; ++s) {
    Shape sh{};
    sh.disc = (s % 2) == 0;
    sh.cy = rng.uniform();
    sh.cx = rng.uniform();
    sh.ry = 0.06 + 0.14 * rng.uniform();
    sh.rx = 0.06 + 0.14 * rng.uniform();
    for (double& c : sh.color) c = 30.0 + 195.0 * rng.uniform();
    shapes.push_back(sh);
  }

  RgbImage img(height, width);
  for (Index r = 0; r < height; ++r) {
    const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(height);
    for (Index c = 0; c < width; ++c) {
      const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(width);
      double rgb[3];
      for (int ch = 0; ch < 3; ++ch) {
        double v = base[ch] + gy[ch] * (y - 0.5) + gx[ch] * (x - 0.5);
        for (const auto& w : waves[ch]) {
          v += w.amp * std::sin(2.0 * std::numbers::pi * (w.fy * y + w.fx * x) + w.phase);
        }
        rgb[ch] = v;
      }
      for (const auto& sh : shapes) {
        const double dy = (y - sh.cy) / sh.ry;
        const double dx = (x - sh.cx) / sh.rx;
        const bool inside = sh.disc ? dy * dy + dx * dx <= 1.0 : std::abs(dy) <= 1.0 && std::abs(dx) <= 1.0;
        if (inside) {
          for (int ch = 0; ch < 3; ++ch) rgb[ch] = sh.color[ch];
        }
      }
      for (int ch = 0; ch < 3; ++ch) {
        img.at(r, c, ch) = static_cast<std::uint8_t>(std::lround(std::clamp(rgb[ch], 0.0, 255.0)));
      }
    }
  }
  return img;
}

}  // namespace quatcomp
