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
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quatcomp/completion.hpp"
#include "quatcomp/image.hpp"
#include "quatcomp/mask.hpp"
#include "quatcomp/qmatrix.hpp"

namespace quatcomp::cli {

/// Raised for bad flags, unreadable inputs and similar; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Problem {
  std::string input;
  bool synthetic = false;
  QMatrix truth;
  std::optional<RgbImage> image;
};

/// Loads an image file or generates a `synth:` descriptor.
Problem load_problem(const std::string& input);

struct RunSpec {
  std::string input;
  std::optional<std::string> mask_path;
  std::optional<std::string> pattern;
  Method method = Method::Qtnn;
  SolverConfig cfg;
  std::uint64_t seed = 0;
};

/// Mask from a file or a pattern string; random patterns without a seed use
/// spec.seed. Throws UsageError on mismatched dimensions.
Mask resolve_mask(const RunSpec& spec, Index rows, Index cols);
std::string mask_label(const RunSpec& spec);

struct ReportRow {
  std::string row_type = "run";
  std::string input;
  std::string method;
  Index r = 0;
  std::string pattern;
  double psnr = 0.0;
  std::optional<double> ssim;
  double rel_error = 0.0;
  int iterations = 0;
  int inner_iterations = 0;
  double wall_seconds = 0.0;
  bool converged = false;
  std::uint64_t seed = 0;
};

struct RunResult {
  ReportRow row;
  SolverReport report;
};

/// Runs one solver on `problem`, observed through `mask`. For images, PSNR and
/// SSIM are taken on the clamped decode; for synthetic inputs PSNR uses the
/// largest truth component as peak and SSIM is left empty.
RunResult execute(const RunSpec& spec, const Problem& problem, const Mask& mask);

/// Column list of the CSV report, in order.
const std::vector<std::string>& report_columns();
std::string csv_header();
std::string csv_line(const ReportRow& row);
std::string format_double(double v);

/// Writes through a temporary file in the destination directory, then renames.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(const std::filesystem::path&)>& writer);
void write_text_atomically(const std::filesystem::path& path, const std::string& text);

/// Recovered synthetic matrix as {"rows", "cols", "planes": [w, x, y, z]},
/// each plane a row-major list of rows.
std::string qmatrix_to_json(const QMatrix& q);
QMatrix qmatrix_from_json(const std::string& text);

/// QUATCOMP_THREADS if set to a positive integer, else the hardware count.
unsigned worker_count(std::size_t jobs);

/// Runs job(i) for i in [0, n) on up to worker_count(n) threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job);

}  // namespace quatcomp::cli
