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


#include "run.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "quatcomp/errors.hpp"
#include "quatcomp/mask_pattern.hpp"
#include "quatcomp/metrics.hpp"
#include "quatcomp/synthetic.hpp"

namespace quatcomp::cli {

Problem load_problem(const std::string& input) {
  Problem p;
  p.input = input;
  if (is_synthetic_descriptor(input)) {
    p.synthetic = true;
    try {
      p.truth = make_low_rank(parse_synthetic(input));
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
    return p;
  }
  try {
    p.image = read_image(input);
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  }
  p.truth = encode(*p.image);
  return p;
}

Mask resolve_mask(const RunSpec& spec, Index rows, Index cols) {
  if (spec.mask_path.has_value() == spec.pattern.has_value()) {
    throw UsageError("exactly one of --mask and --pattern is required");
  }
  Mask mask;
  try {
    if (spec.mask_path) {
      mask = read_mask(*spec.mask_path);
    } else {
      mask = make_mask(parse_patterns(*spec.pattern, spec.seed), rows, cols);
    }
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  if (mask.rows() != rows || mask.cols() != cols) {
    std::ostringstream os;
    os << "mask is " << mask.rows() << "x" << mask.cols() << " but the input is " << rows << "x" << cols;
    throw UsageError(os.str());
  }
  return mask;
}

std::string mask_label(const RunSpec& spec) {
  if (spec.mask_path) return "file:" + *spec.mask_path;
  return to_string(parse_patterns(*spec.pattern, spec.seed));
}

RunResult execute(const RunSpec& spec, const Problem& problem, const Mask& mask) {
  RunResult out;
  out.report = complete(spec.method, project(problem.truth, mask), mask, spec.cfg);
  ReportRow& row = out.row;
  row.input = problem.input;
  row.method = std::string(to_string(spec.method));
  row.r = is_truncated(spec.method) ? spec.cfg.rank : 0;
  row.pattern = mask_label(spec);
  if (problem.synthetic) {
    row.psnr = matrix_psnr(problem.truth, out.report.recovered);
  } else {
    const RgbImage recovered = decode(out.report.recovered);
    row.psnr = psnr(*problem.image, recovered);
    if (recovered.height >= 11 && recovered.width >= 11) row.ssim = ssim(*problem.image, recovered);
  }
  row.rel_error = relative_error(problem.truth, out.report.recovered);
  row.iterations = out.report.outer_iterations;
  row.inner_iterations = out.report.inner_iterations;
  row.wall_seconds = out.report.wall_seconds;
  row.converged = out.report.converged;
  row.seed = spec.seed;
  return out;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{"row_type",   "input",          "method",     "r",
                                             "pattern",    "psnr",           "ssim",       "rel_error",
                                             "iterations", "inner_iterations", "wall_seconds", "converged",
                                             "seed"};
  return cols;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : report_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + "\n";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string csv_line(const ReportRow& row) {
  std::ostringstream os;
  os << row.row_type << ',' << csv_field(row.input) << ',' << row.method << ',' << row.r << ','
     << csv_field(row.pattern) << ',' << format_double(row.psnr) << ','
     << (row.ssim ? format_double(*row.ssim) : std::string()) << ',' << format_double(row.rel_error) << ','
     << row.iterations << ',' << row.inner_iterations << ',' << format_double(row.wall_seconds) << ','
     << (row.converged ? "true" : "false") << ',' << row.seed << '\n';
  return os.str();
}

void write_atomically(const std::filesystem::path& path,
                      const std::function<void(const std::filesystem::path&)>& writer) {
  static std::atomic<unsigned> counter{0};
  const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const std::filesystem::path tmp =
      dir / ("." + path.stem().string() + ".tmp-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)) + path.extension().string());
  try {
    writer(tmp);
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

void write_text_atomically(const std::filesystem::path& path, const std::string& text) {
  write_atomically(path, [&](const std::filesystem::path& tmp) {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot open " + tmp.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw UsageError("write failed for " + tmp.string());
  });
}

std::string qmatrix_to_json(const QMatrix& q) {
  nlohmann::json planes = nlohmann::json::array();
  for (int p = 0; p < 4; ++p) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < q.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Index j = 0; j < q.cols(); ++j) row.push_back(q.plane(p)(i, j));
      rows.push_back(std::move(row));
    }
    planes.push_back(std::move(rows));
  }
  nlohmann::json doc{{"rows", q.rows()}, {"cols", q.cols()}, {"planes", std::move(planes)}};
  return doc.dump() + "\n";
}

QMatrix qmatrix_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const Index rows = doc.at("rows").get<Index>();
    const Index cols = doc.at("cols").get<Index>();
    QMatrix q(rows, cols);
    const auto& planes = doc.at("planes");
    if (planes.size() != 4) throw FormatError("matrix json: expected four planes");
    for (int p = 0; p < 4; ++p) {
      for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) q.plane(p)(i, j) = planes[p].at(i).at(j).get<double>();
      }
    }
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("matrix json: ") + e.what());
  }
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("QUATCOMP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
  }
  if (n == 0) n = 1;
  if (jobs < n) n = static_cast<unsigned>(jobs == 0 ? 1 : jobs);
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job) {
  const unsigned workers = worker_count(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto loop = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < workers; ++t) threads.emplace_back(loop);
  loop();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace quatcomp::cli
