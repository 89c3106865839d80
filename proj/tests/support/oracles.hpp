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

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "quatcomp/image.hpp"
#include "quatcomp/qmatrix.hpp"
#include "quatcomp/quaternion.hpp"

namespace oracle {

using quatcomp::Index;
using quatcomp::QMatrix;
using quatcomp::Quaternion;

inline Quaternion random_quaternion(std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(gen), n(gen), n(gen), n(gen)};
}

inline QMatrix random_matrix(Index rows, Index cols, std::mt19937_64& gen) {
  QMatrix q(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) q.set(i, j, random_quaternion(gen));
  }
  return q;
}

// Product from the multiplication table of the basis {1, i, j, k}.
inline Quaternion table_product(const Quaternion& a, const Quaternion& b) {
  // kTable[p][q] = (sign, index) of e_p * e_q.
  static constexpr std::array<std::array<std::pair<int, int>, 4>, 4> kTable{{
      {{{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
      {{{1, 1}, {-1, 0}, {1, 3}, {-1, 2}}},
      {{{1, 2}, {-1, 3}, {-1, 0}, {1, 1}}},
      {{{1, 3}, {1, 2}, {-1, 1}, {-1, 0}}},
  }};
  const double av[4] = {a.w, a.x, a.y, a.z};
  const double bv[4] = {b.w, b.x, b.y, b.z};
  double out[4] = {0, 0, 0, 0};
  for (int p = 0; p < 4; ++p) {
    for (int q = 0; q < 4; ++q) {
      const auto [sign, idx] = kTable[p][q];
      out[idx] += sign * av[p] * bv[q];
    }
  }
  return {out[0], out[1], out[2], out[3]};
}

// Entry-by-entry product using table_product.
inline QMatrix naive_product(const QMatrix& a, const QMatrix& b) {
  QMatrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      Quaternion s;
      for (Index k = 0; k < a.cols(); ++k) s += table_product(a(i, k), b(k, j));
      c.set(i, j, s);
    }
  }
  return c;
}

// 4 x 4 real matrix of left multiplication by q.
inline Eigen::Matrix4d left_matrix(const Quaternion& q) {
  Eigen::Matrix4d m;
  m << q.w, -q.x, -q.y, -q.z,
       q.x, q.w, -q.z, q.y,
       q.y, q.z, q.w, -q.x,
       q.z, -q.y, q.x, q.w;
  return m;
}

// 4M x 4N real representation; a ring homomorphism that maps A^H to its transpose.
inline Eigen::MatrixXd real_adjoint(const QMatrix& a) {
  Eigen::MatrixXd r(4 * a.rows(), 4 * a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) r.block<4, 4>(4 * i, 4 * j) = left_matrix(a(i, j));
  }
  return r;
}

// Quaternion singular values from the real representation: each appears four
// times, so every fourth value of the sorted list is kept.
inline Eigen::VectorXd real_adjoint_sigma(const QMatrix& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(real_adjoint(a));
  const Eigen::VectorXd all = svd.singularValues();
  const Index k = std::min(a.rows(), a.cols());
  Eigen::VectorXd s(k);
  for (Index t = 0; t < k; ++t) s(t) = all(4 * t);
  return s;
}

inline double oracle_nuclear_norm(const QMatrix& a) { return real_adjoint_sigma(a).sum(); }

// Rows made orthonormal under <a, b> = sum_k a_k conj(b_k) by Gram-Schmidt.
inline QMatrix orthonormal_rows(Index r, Index n, std::mt19937_64& gen) {
  QMatrix a = random_matrix(r, n, gen);
  for (Index i = 0; i < r; ++i) {
    for (Index p = 0; p < i; ++p) {
      Quaternion c;
      for (Index k = 0; k < n; ++k) c += table_product(a(i, k), a(p, k).conj());
      for (Index k = 0; k < n; ++k) a.set(i, k, a(i, k) - table_product(c, a(p, k)));
    }
    double norm2 = 0.0;
    for (Index k = 0; k < n; ++k) norm2 += a(i, k).squared_norm();
    const double inv = 1.0 / std::sqrt(norm2);
    for (Index k = 0; k < n; ++k) a.set(i, k, a(i, k) * inv);
  }
  return a;
}

inline quatcomp::RgbImage random_image(Index h, Index w, std::mt19937_64& gen) {
  quatcomp::RgbImage img(h, w);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(d(gen));
  return img;
}

// SSIM by explicit 11 x 11 window sums at every valid position, with the
// local statistics computed as weighted central moments.
inline double reference_ssim(const quatcomp::RgbImage& x, const quatcomp::RgbImage& y) {
  constexpr int kW = 11;
  const double sigma = 1.5;
  double win[kW][kW];
  double total = 0.0;
  for (int a = 0; a < kW; ++a) {
    for (int b = 0; b < kW; ++b) {
      const double da = a - 5;
      const double db = b - 5;
      win[a][b] = std::exp(-(da * da + db * db) / (2 * sigma * sigma));
      total += win[a][b];
    }
  }
  for (auto& row : win) {
    for (double& v : row) v /= total;
  }
  const double c1 = std::pow(0.01 * 255, 2);
  const double c2 = std::pow(0.03 * 255, 2);
  double acc = 0.0;
  for (int ch = 0; ch < 3; ++ch) {
    double sum = 0.0;
    long count = 0;
    for (Index r = 0; r + kW <= x.height; ++r) {
      for (Index c = 0; c + kW <= x.width; ++c) {
        double mx = 0, my = 0;
        for (int a = 0; a < kW; ++a) {
          for (int b = 0; b < kW; ++b) {
            mx += win[a][b] * x.at(r + a, c + b, ch);
            my += win[a][b] * y.at(r + a, c + b, ch);
          }
        }
        double vx = 0, vy = 0, cov = 0;
        for (int a = 0; a < kW; ++a) {
          for (int b = 0; b < kW; ++b) {
            const double dx = x.at(r + a, c + b, ch) - mx;
            const double dy = y.at(r + a, c + b, ch) - my;
            vx += win[a][b] * dx * dx;
            vy += win[a][b] * dy * dy;
            cov += win[a][b] * dx * dy;
          }
        }
        sum += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
        ++count;
      }
    }
    acc += sum / static_cast<double>(count);
  }
  return acc / 3.0;
}

// 10 log10(255^2 / MSE) straight from the definition.
inline double reference_psnr(const quatcomp::RgbImage& x, const quatcomp::RgbImage& y) {
  double sse = 0.0;
  for (std::size_t k = 0; k < x.pixels.size(); ++k) {
    const double d = double(x.pixels[k]) - double(y.pixels[k]);
    sse += d * d;
  }
  return 10.0 * std::log10(255.0 * 255.0 * static_cast<double>(x.pixels.size()) / sse);
}

}  // namespace oracle
