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
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "quatcomp/errors.hpp"
#include "quatcomp/metrics.hpp"

namespace quatcomp {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

void check_same(const RgbImage& x, const RgbImage& y, const char* what) {
  if (x.height != y.height || x.width != y.width) {
    throw DimensionError(std::string(what) + ": image dimensions differ");
  }
}

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> g{};
  double sum = 0.0;
  for (int t = 0; t < kWindow; ++t) {
    const double d = t - kWindow / 2;
    g[t] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += g[t];
  }
  for (auto& v : g) v /= sum;
  return g;
}

// Valid-mode separable Gaussian filter of an h x w row-major field.
std::vector<double> filter(const std::vector<double>& f, Index h, Index w, const std::array<double, kWindow>& g) {
  const Index ow = w - kWindow + 1;
  const Index oh = h - kWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h * ow));
  for (Index r = 0; r < h; ++r) {
    for (Index c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int t = 0; t < kWindow; ++t) s += g[t] * f[static_cast<std::size_t>(r * w + c + t)];
      tmp[static_cast<std::size_t>(r * ow + c)] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh * ow));
  for (Index r = 0; r < oh; ++r) {
    for (Index c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int t = 0; t < kWindow; ++t) s += g[t] * tmp[static_cast<std::size_t>((r + t) * ow + c)];
      out[static_cast<std::size_t>(r * ow + c)] = s;
    }
  }
  return out;
}

double channel_ssim(const RgbImage& x, const RgbImage& y, int ch, const std::array<double, kWindow>& g) {
  const Index h = x.height;
  const Index w = x.width;
  const std::size_t n = static_cast<std::size_t>(h * w);
  std::vector<double> a(n), b(n), aa(n), bb(n), ab(n);
  for (Index r = 0; r < h; ++r) {
    for (Index c = 0; c < w; ++c) {
      const std::size_t k = static_cast<std::size_t>(r * w + c);
      a[k] = x.at(r, c, ch);
      b[k] = y.at(r, c, ch);
      aa[k] = a[k] * a[k];
      bb[k] = b[k] * b[k];
      ab[k] = a[k] * b[k];
    }
  }
  const auto mu_a = filter(a, h, w, g);
  const auto mu_b = filter(b, h, w, g);
  const auto e_aa = filter(aa, h, w, g);
  const auto e_bb = filter(bb, h, w, g);
  const auto e_ab = filter(ab, h, w, g);
  double total = 0.0;
  for (std::size_t k = 0; k < mu_a.size(); ++k) {
    const double ma = mu_a[k];
    const double mb = mu_b[k];
    const double va = e_aa[k] - ma * ma;
    const double vb = e_bb[k] - mb * mb;
    const double cov = e_ab[k] - ma * mb;
    total += ((2 * ma * mb + kC1) * (2 * cov + kC2)) / ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
  }
  return total / static_cast<double>(mu_a.size());
}

}  // namespace

double psnr(const RgbImage& x, const RgbImage& y) {
  check_same(x, y, "psnr");
  if (x.pixels.empty()) throw DimensionError("psnr: empty images");
  double sse = 0.0;
  for (std::size_t k = 0; k < x.pixels.size(); ++k) {
    const double d = static_cast<double>(x.pixels[k]) - static_cast<double>(y.pixels[k]);
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(x.pixels.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double psnr(const QMatrix& x, const QMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("psnr: matrix dimensions differ");
  return psnr(decode(x), decode(y));
}

double ssim(const RgbImage& x, const RgbImage& y) {
  check_same(x, y, "ssim");
  if (x.height < kWindow || x.width < kWindow) {
    throw DimensionError("ssim: images must be at least 11 x 11");
  }
  const auto g = gaussian_taps();
  double sum = 0.0;
  for (int ch = 0; ch < 3; ++ch) sum += channel_ssim(x, y, ch, g);
  return sum / 3.0;
}

double ssim(const QMatrix& x, const QMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("ssim: matrix dimensions differ");
  return ssim(decode(x), decode(y));
}

double matrix_psnr(const QMatrix& truth, const QMatrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw DimensionError("matrix_psnr: dimensions differ");
  }
  double peak = 0.0;
  double sse = 0.0;
  for (int p = 0; p < 4; ++p) {
    peak = std::max(peak, truth.plane(p).cwiseAbs().maxCoeff());
    sse += (truth.plane(p) - estimate.plane(p)).squaredNorm();
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / (4.0 * static_cast<double>(truth.size()));
  return 10.0 * std::log10(peak * peak / mse);
}

double relative_error(const QMatrix& truth, const QMatrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw DimensionError("relative_error: dimensions differ");
  }
  const double denom = truth.frobenius_norm();
  const double num = (estimate - truth).frobenius_norm();
  if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

}  // namespace quatcomp
