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
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "quatcomp/image.hpp"
#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

/// Seeded standard normal draws from mt19937_64 via Box-Muller, so the stream
/// is the same on every standard library.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : gen_(seed) {}
  double next();
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Entries with i.i.d. standard normal components.
QMatrix random_qmatrix(Index rows, Index cols, NormalSource& rng);
QMatrix random_qmatrix(Index rows, Index cols, std::uint64_t seed);

/// synth:MxN:rank=K:scale=S:seed=T. The matrix is U * V^H with Gaussian
/// factors of width K, rescaled so the root-mean-square entry modulus is S.
struct SyntheticSpec {
  Index rows = 0;
  Index cols = 0;
  Index rank = 1;
  double scale = 100.0;
  std::uint64_t seed = 0;
};

bool is_synthetic_descriptor(std::string_view text);
/// Throws PreconditionError on malformed descriptors.
SyntheticSpec parse_synthetic(std::string_view text);
std::string to_string(const SyntheticSpec& spec);
QMatrix make_low_rank(const SyntheticSpec& spec);

/// Smooth seeded RGB scene (gradients, low-frequency waves and a few flat
/// shapes) for end-to-end runs that need no image files.
RgbImage make_test_image(Index height, Index width, std::uint64_t seed);

}  // namespace quatcomp
