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


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "quatcomp/errors.hpp"
#include "quatcomp/image.hpp"
#include "quatcomp/mask_pattern.hpp"
#include "quatcomp/metrics.hpp"
#include "support/oracles.hpp"

using namespace quatcomp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "quatcomp_imaging_tests";
  fs::create_directories(dir);
  return dir / name;
}

RgbImage filled(Index h, Index w, std::uint8_t v) {
  RgbImage img(h, w);
  std::fill(img.pixels.begin(), img.pixels.end(), v);
  return img;
}

}  // namespace

TEST(Codec, BlackAndRed) {
  EXPECT_EQ(encode(filled(4, 5, 0)), QMatrix(4, 5));
  RgbImage red(3, 3);
  for (Index r = 0; r < 3; ++r) {
    for (Index c = 0; c < 3; ++c) red.at(r, c, 0) = 255;
  }
  const auto q = encode(red);
  EXPECT_TRUE(q.is_pure());
  EXPECT_EQ(q.plane(1), Eigen::MatrixXd::Constant(3, 3, 255.0));
  EXPECT_TRUE(q.plane(2).isZero(0.0));
  EXPECT_TRUE(q.plane(3).isZero(0.0));
}

TEST(Codec, RoundTrip) {
  std::mt19937_64 gen(71);
  const auto img = oracle::random_image(17, 23, gen);
  const auto q = encode(img);
  EXPECT_TRUE(q.is_pure());
  EXPECT_EQ(decode(q), img);
}

TEST(Codec, DecodeClampsAndRounds) {
  QMatrix q(1, 3);
  q.set(0, 0, {7, -12.0, 300.0, 1.49});
  q.set(0, 1, {0, 2.5, 253.51, std::numeric_limits<double>::quiet_NaN()});
  q.set(0, 2, {0, 0.5000001, 254.4999, 128});
  const auto img = decode(q);
  EXPECT_EQ(img.at(0, 0, 0), 0);
  EXPECT_EQ(img.at(0, 0, 1), 255);
  EXPECT_EQ(img.at(0, 0, 2), 1);
  EXPECT_EQ(img.at(0, 1, 0), 3);
  EXPECT_EQ(img.at(0, 1, 1), 254);
  EXPECT_EQ(img.at(0, 1, 2), 0);
  EXPECT_EQ(img.at(0, 2, 0), 1);
  EXPECT_EQ(img.at(0, 2, 1), 254);
}

TEST(ImageFiles, PngAndPpmRoundTrip) {
  std::mt19937_64 gen(72);
  const auto img = oracle::random_image(13, 9, gen);
  write_image(scratch("a.png"), img);
  write_image(scratch("a.ppm"), img);
  EXPECT_EQ(read_image(scratch("a.png")), img);
  EXPECT_EQ(read_image(scratch("a.ppm")), img);
  EXPECT_THROW(write_image(scratch("a.bmp"), img), FormatError);
}

TEST(ImageFiles, PpmWithComments) {
  const auto path = scratch("c.ppm");
  {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n# made by hand\n2 1\n255\n";
    const unsigned char px[6] = {1, 2, 3, 250, 251, 252};
    out.write(reinterpret_cast<const char*>(px), 6);
  }
  const auto img = read_image(path);
  EXPECT_EQ(img.width, 2);
  EXPECT_EQ(img.at(0, 1, 2), 252);
}

TEST(ImageFiles, RejectsNonRgb) {
  // An 8-bit grayscale PNG, written through the mask serializer.
  Mask m(4, 4, true);
  write_mask_png(scratch("gray.png"), m);
  EXPECT_THROW(read_image(scratch("gray.png")), FormatError);
  {
    std::ofstream out(scratch("p5.ppm"), std::ios::binary);
    out << "P5\n1 1\n255\n" << '\0';
  }
  EXPECT_THROW(read_image(scratch("p5.ppm")), FormatError);
  {
    std::ofstream out(scratch("wide.ppm"), std::ios::binary);
    out << "P6\n1 1\n65535\n" << std::string(6, '\0');
  }
  EXPECT_THROW(read_image(scratch("wide.ppm")), FormatError);
  {
    std::ofstream out(scratch("short.ppm"), std::ios::binary);
    out << "P6\n4 4\n255\nabc";
  }
  EXPECT_THROW(read_image(scratch("short.ppm")), FormatError);
  EXPECT_THROW(read_image(scratch("missing.png")), FormatError);
}

TEST(Masks, RandomExtremes) {
  EXPECT_TRUE(make_mask(RandomPattern{0.0, 1}, 30, 20).fully_observed());
  EXPECT_EQ(make_mask(RandomPattern{1.0, 1}, 30, 20).observed_count(), 0);
  EXPECT_THROW(make_mask(RandomPattern{1.5, 1}, 3, 3), PreconditionError);
}

TEST(Masks, RandomRate) {
  const Mask m = make_mask(RandomPattern{0.5, 81}, 300, 300);
  const double frac = static_cast<double>(m.missing_count()) / 90000.0;
  EXPECT_NEAR(frac, 0.5, 0.01);
  for (double p : {0.2, 0.65, 0.75}) {
    const Mask q = make_mask(RandomPattern{p, 82}, 100, 120);
    const double f = static_cast<double>(q.missing_count()) / 12000.0;
    EXPECT_NEAR(f, p, 3.0 * std::sqrt(p * (1 - p) / 12000.0));
  }
  EXPECT_EQ(make_mask(RandomPattern{0.5, 83}, 40, 40), make_mask(RandomPattern{0.5, 83}, 40, 40));
  EXPECT_NE(make_mask(RandomPattern{0.5, 83}, 40, 40), make_mask(RandomPattern{0.5, 84}, 40, 40));
}

TEST(Masks, Block) {
  EXPECT_EQ(make_mask(BlockPattern{0, 0, 7, 5}, 5, 7).observed_count(), 0);
  const Mask m = make_mask(BlockPattern{2, 1, 3, 2}, 5, 7);
  EXPECT_EQ(m.missing_count(), 6);
  EXPECT_FALSE(m.observed(1, 2));
  EXPECT_FALSE(m.observed(2, 4));
  EXPECT_TRUE(m.observed(3, 2));
  EXPECT_TRUE(m.observed(1, 5));
  EXPECT_THROW(make_mask(BlockPattern{5, 0, 3, 2}, 5, 7), PreconditionError);
  EXPECT_THROW(make_mask(BlockPattern{-1, 0, 3, 2}, 5, 7), PreconditionError);
}

TEST(Masks, TriangleArea) {
  for (double base : {20.0, 41.0, 80.0}) {
    const Mask m = make_mask(TrianglePattern{3, 50, base}, 100, 100);
    const double area = base * base * std::sqrt(3.0) / 4.0;
    EXPECT_NEAR(static_cast<double>(m.missing_count()), area, base);
  }
  EXPECT_THROW(make_mask(TrianglePattern{60, 50, 60}, 100, 100), PreconditionError);
  EXPECT_THROW(make_mask(TrianglePattern{0, 5, 30}, 100, 100), PreconditionError);
}

TEST(Masks, Diamond) {
  const Mask m = make_mask(DiamondPattern{10, 12, 4}, 30, 30);
  EXPECT_EQ(m.missing_count(), 2 * 4 * 4 + 2 * 4 + 1);
  EXPECT_FALSE(m.observed(14, 12));
  EXPECT_TRUE(m.observed(13, 14));
  EXPECT_THROW(make_mask(DiamondPattern{2, 12, 4}, 30, 30), PreconditionError);
}

TEST(Masks, UnionAndParsing) {
  const auto patterns = parse_patterns("block:x=0:y=0:w=2:h=2+diamond:row=5:col=5:half=1");
  ASSERT_EQ(patterns.size(), 2u);
  const Mask m = make_mask(patterns, 8, 8);
  EXPECT_EQ(m.missing_count(), 4 + 5);
  EXPECT_EQ(to_string(patterns), "block:x=0:y=0:w=2:h=2+diamond:row=5:col=5:half=1");
  const auto r = parse_pattern("random:p=0.5", 9);
  EXPECT_EQ(std::get<RandomPattern>(r).seed, 9u);
  EXPECT_THROW(parse_pattern("random:p=0.5"), PreconditionError);
  EXPECT_THROW(parse_pattern("ellipse:a=1"), PreconditionError);
  EXPECT_THROW(parse_pattern("block:x=1:y=2:w=3"), PreconditionError);
  EXPECT_THROW(parse_pattern("block:x=1:y=2:w=3:h=q"), PreconditionError);
  EXPECT_THROW(parse_pattern("block:x=1:y=2:w=3:h=4:z=1"), PreconditionError);
  for (const char* text : {"random:p=0.25:seed=7", "triangle:row=1:col=2:base=3.5"}) {
    EXPECT_EQ(to_string(parse_pattern(text)), text);
  }
}

TEST(Masks, ProjectionSplitsImage) {
  std::mt19937_64 gen(85);
  const auto q = encode(oracle::random_image(20, 20, gen));
  const Mask m = make_mask(RandomPattern{0.4, 86}, 20, 20);
  EXPECT_EQ(project(q, m) + project(q, m.complement()), q);
}

TEST(MaskFiles, RoundTrip) {
  const Mask m = make_mask(parse_patterns("random:p=0.3:seed=4+block:x=1:y=2:w=5:h=3"), 19, 21);
  write_mask(scratch("m.png"), m);
  write_mask(scratch("m.json"), m);
  EXPECT_EQ(read_mask(scratch("m.png")), m);
  EXPECT_EQ(read_mask(scratch("m.json")), m);
  EXPECT_EQ(mask_from_json(mask_to_json(m)), m);
  EXPECT_EQ(mask_to_json(make_mask(BlockPattern{1, 0, 1, 1}, 1, 2)),
            "{\"cols\":2,\"missing\":[[0,1]],\"rows\":1}\n");
  EXPECT_THROW(mask_from_json("{\"rows\":2,\"cols\":2,\"missing\":[[2,0]]}"), FormatError);
  EXPECT_THROW(mask_from_json("not json"), FormatError);
  EXPECT_THROW(read_mask(scratch("m.txt")), FormatError);
}

TEST(Psnr, Sentinels) {
  std::mt19937_64 gen(91);
  const auto x = oracle::random_image(12, 12, gen);
  EXPECT_EQ(psnr(x, x), std::numeric_limits<double>::infinity());
  EXPECT_EQ(psnr(filled(5, 5, 0), filled(5, 5, 255)), 0.0);
  EXPECT_THROW(psnr(filled(5, 5, 0), filled(5, 6, 0)), DimensionError);
}

TEST(Psnr, UniformOffset) {
  EXPECT_NEAR(psnr(filled(8, 8, 100), filled(8, 8, 116)), 10.0 * std::log10(255.0 * 255.0 / 256.0), 1e-12);
  // Independent decimal evaluation of the same expression.
  EXPECT_NEAR(psnr(filled(8, 8, 100), filled(8, 8, 116)), 24.04840395556061, 1e-12);
  double prev = std::numeric_limits<double>::infinity();
  for (int d = 1; d < 60; d += 7) {
    const double v = psnr(filled(6, 6, 10), filled(6, 6, static_cast<std::uint8_t>(10 + d)));
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Psnr, SymmetricAndMatchesDefinition) {
  std::mt19937_64 gen(92);
  const auto x = oracle::random_image(15, 11, gen);
  const auto y = oracle::random_image(15, 11, gen);
  EXPECT_EQ(psnr(x, y), psnr(y, x));
  EXPECT_NEAR(psnr(x, y), oracle::reference_psnr(x, y), 1e-12);
  EXPECT_EQ(psnr(encode(x), encode(y)), psnr(x, y));
}

TEST(Ssim, IdentityAndSymmetry) {
  std::mt19937_64 gen(93);
  const auto x = oracle::random_image(20, 16, gen);
  const auto y = oracle::random_image(20, 16, gen);
  EXPECT_NEAR(ssim(x, x), 1.0, 1e-12);
  EXPECT_NEAR(ssim(x, y), ssim(y, x), 1e-12);
  EXPECT_THROW(ssim(filled(10, 20, 0), filled(10, 20, 0)), DimensionError);
}

TEST(Ssim, ConstantImages) {
  // Zero variances leave C1 / (255^2 + C1) with C1 = (0.01 * 255)^2.
  EXPECT_NEAR(ssim(filled(16, 16, 0), filled(16, 16, 255)), 9.999000099990003e-05, 1e-12);
}

TEST(Ssim, MatchesDirectWindowReference) {
  std::mt19937_64 gen(94);
  for (int t = 0; t < 3; ++t) {
    const auto x = oracle::random_image(24, 30, gen);
    auto y = x;
    std::normal_distribution<double> noise(0.0, 20.0);
    for (auto& p : y.pixels) p = static_cast<std::uint8_t>(std::clamp(p + noise(gen), 0.0, 255.0));
    EXPECT_NEAR(ssim(x, y), oracle::reference_ssim(x, y), 1e-6);
  }
}

TEST(Metrics, MatrixPsnrAndRelativeError) {
  QMatrix a(2, 2);
  a.set(0, 0, {4, 0, 0, 0});
  QMatrix b = a;
  b.set(1, 1, {0, 0, 1, 0});
  EXPECT_NEAR(matrix_psnr(a, b), 10.0 * std::log10(16.0 / (1.0 / 16.0)), 1e-12);
  EXPECT_EQ(matrix_psnr(a, a), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(relative_error(a, b), 0.25, 1e-15);
}
