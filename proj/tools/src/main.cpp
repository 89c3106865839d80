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
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "quatcomp/errors.hpp"
#include "quatcomp/mask_pattern.hpp"
#include "run.hpp"

namespace qc = quatcomp;
namespace cli = quatcomp::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnconverged = 2;

struct SolverFlags {
  std::string method = "qtnn";
  std::optional<qc::Index> rank;
  std::optional<double> rho, beta0, eps1, cap, tol, inner_tol, theta1, theta2;
  std::optional<int> max_outer, max_inner;
  std::optional<std::string> weight_side;
  std::uint64_t seed = 0;
};

struct InputFlags {
  std::string input;
  std::optional<std::string> mask;
  std::optional<std::string> pattern;
};

void add_input_flags(CLI::App* app, InputFlags& in) {
  app->add_option("--input,-i", in.input, "Image file (PNG or P6 PPM) or synth:MxN:rank=K:scale=S:seed=T")
      ->required();
  app->add_option("--mask", in.mask, "Mask file (.png or .json)");
  app->add_option("--pattern", in.pattern,
                  "Mask pattern, e.g. random:p=0.5, block:x=:y=:w=:h=, triangle:row=:col=:base=, "
                  "diamond:row=:col=:half=; join with '+'");
}

void add_solver_flags(CLI::App* app, SolverFlags& f, bool with_rank) {
  app->add_option("--method", f.method, "qtnn | wqtnn | dwqtnn | qnn-baseline")->capture_default_str();
  if (with_rank) app->add_option("--rank,-r", f.rank, "Truncation rank r (required for truncated methods)");
  app->add_option("--rho", f.rho, "Penalty growth factor (> 1)");
  app->add_option("--beta0", f.beta0, "Initial ADMM penalty (qtnn, qnn-baseline)");
  app->add_option("--eps1", f.eps1, "Initial step parameter (wqtnn, dwqtnn)");
  app->add_option("--cap", f.cap, "Upper limit for the penalty or step parameter");
  app->add_option("--tol", f.tol, "Outer relative-change tolerance");
  app->add_option("--inner-tol", f.inner_tol, "Inner ADMM tolerance (qtnn)");
  app->add_option("--max-outer", f.max_outer, "Outer iteration limit");
  app->add_option("--max-inner", f.max_inner, "Inner iteration limit (qtnn)");
  app->add_option("--theta1", f.theta1, "Weight scale on the full-factor term");
  app->add_option("--theta2", f.theta2, "Weight scale on the truncated-factor term");
  app->add_option("--weight-side", f.weight_side, "rows | cols");
  app->add_option("--seed", f.seed, "Run seed; also seeds random patterns given without one")
      ->capture_default_str();
}

qc::Method resolve_method(const SolverFlags& f) {
  const auto m = qc::parse_method(f.method);
  if (!m) throw cli::UsageError("unknown method '" + f.method + "'");
  return *m;
}

qc::SolverConfig build_config(const SolverFlags& f, qc::Method method, bool rank_required) {
  qc::SolverConfig cfg = qc::SolverConfig::defaults_for(method);
  if (f.beta0 && f.eps1) throw cli::UsageError("--beta0 and --eps1 are mutually exclusive");
  if (rank_required && qc::is_truncated(method) && !f.rank) {
    throw cli::UsageError("--rank is required for method " + f.method);
  }
  if (f.rank) cfg.rank = *f.rank;
  if (f.rho) cfg.rho = *f.rho;
  if (f.beta0) cfg.step_seed = *f.beta0;
  if (f.eps1) cfg.step_seed = *f.eps1;
  if (f.cap) cfg.step_cap = *f.cap;
  if (f.tol) cfg.outer_tol = *f.tol;
  if (f.inner_tol) cfg.inner_tol = *f.inner_tol;
  if (f.max_outer) cfg.max_outer = *f.max_outer;
  if (f.max_inner) cfg.max_inner = *f.max_inner;
  if (f.theta1) cfg.theta1 = *f.theta1;
  if (f.theta2) cfg.theta2 = *f.theta2;
  if (method == qc::Method::Wqtnn && f.theta1 && !f.theta2) cfg.theta2 = cfg.theta1;
  if (f.weight_side) {
    if (*f.weight_side == "rows") {
      cfg.weight_side = qc::WeightSide::Rows;
    } else if (*f.weight_side == "cols") {
      cfg.weight_side = qc::WeightSide::Cols;
    } else {
      throw cli::UsageError("--weight-side must be rows or cols");
    }
  }
  cfg.rng_seed = f.seed;
  try {
    cfg.validate();
  } catch (const qc::PreconditionError& e) {
    throw cli::UsageError(e.what());
  }
  return cfg;
}

cli::RunSpec make_spec(const InputFlags& in, const SolverFlags& f, bool rank_required) {
  cli::RunSpec spec;
  spec.input = in.input;
  spec.mask_path = in.mask;
  spec.pattern = in.pattern;
  spec.method = resolve_method(f);
  spec.cfg = build_config(f, spec.method, rank_required);
  spec.seed = f.seed;
  return spec;
}

void check_rank(const cli::RunSpec& spec, const cli::Problem& problem) {
  if (!qc::is_truncated(spec.method)) return;
  const qc::Index k = std::min(problem.truth.rows(), problem.truth.cols());
  if (spec.cfg.rank < 1 || spec.cfg.rank > k) {
    throw cli::UsageError("--rank must lie in [1, " + std::to_string(k) + "]");
  }
}

void emit_report(const std::optional<std::string>& path, const std::string& csv) {
  if (path) {
    cli::write_text_atomically(*path, csv);
  } else {
    std::cout << csv;
  }
}

nlohmann::json row_json(const cli::ReportRow& row) {
  nlohmann::json j{{"row_type", row.row_type},     {"input", row.input},
                   {"method", row.method},         {"r", row.r},
                   {"pattern", row.pattern},       {"psnr", cli::format_double(row.psnr)},
                   {"rel_error", row.rel_error},   {"iterations", row.iterations},
                   {"inner_iterations", row.inner_iterations},
                   {"wall_seconds", row.wall_seconds}, {"converged", row.converged},
                   {"seed", row.seed}};
  j["ssim"] = row.ssim ? nlohmann::json(*row.ssim) : nlohmann::json(nullptr);
  return j;
}

// ---- complete --------------------------------------------------------------

struct CompleteArgs {
  InputFlags in;
  SolverFlags solver;
  std::optional<std::string> out, report, json;
};

int run_complete(const CompleteArgs& a) {
  const cli::RunSpec spec = make_spec(a.in, a.solver, true);
  const cli::Problem problem = cli::load_problem(spec.input);
  check_rank(spec, problem);
  const qc::Mask mask = cli::resolve_mask(spec, problem.truth.rows(), problem.truth.cols());
  const cli::RunResult result = cli::execute(spec, problem, mask);

  if (a.out) {
    if (problem.synthetic) {
      cli::write_text_atomically(*a.out, cli::qmatrix_to_json(result.report.recovered));
    } else {
      const qc::RgbImage img = qc::decode(result.report.recovered);
      cli::write_atomically(*a.out, [&](const std::filesystem::path& tmp) { qc::write_image(tmp, img); });
    }
  }
  emit_report(a.report, cli::csv_header() + cli::csv_line(result.row));
  if (a.json) {
    nlohmann::json doc = row_json(result.row);
    doc["residuals"] = result.report.residuals;
    cli::write_text_atomically(*a.json, doc.dump(2) + "\n");
  }
  return result.row.converged ? kExitOk : kExitUnconverged;
}

// ---- mask ------------------------------------------------------------------

struct MaskArgs {
  std::optional<qc::Index> rows, cols;
  std::optional<std::string> like;
  std::string pattern;
  std::uint64_t seed = 0;
  std::string out;
};

int run_mask(const MaskArgs& a) {
  qc::Index rows = 0;
  qc::Index cols = 0;
  if (a.like) {
    if (a.rows || a.cols) throw cli::UsageError("--like excludes --rows/--cols");
    const cli::Problem p = cli::load_problem(*a.like);
    rows = p.truth.rows();
    cols = p.truth.cols();
  } else {
    if (!a.rows || !a.cols) throw cli::UsageError("give --rows and --cols, or --like");
    rows = *a.rows;
    cols = *a.cols;
  }
  qc::Mask mask;
  try {
    mask = qc::make_mask(qc::parse_patterns(a.pattern, a.seed), rows, cols);
  } catch (const qc::PreconditionError& e) {
    throw cli::UsageError(e.what());
  }
  cli::write_atomically(a.out, [&](const std::filesystem::path& tmp) { qc::write_mask(tmp, mask); });
  std::cout << "rows=" << rows << " cols=" << cols << " missing=" << mask.missing_count() << "\n";
  return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  InputFlags in;
  SolverFlags solver;
  qc::Index r_min = 1;
  qc::Index r_max = 10;
  std::optional<std::string> report;
};

int run_sweep(const SweepArgs& a) {
  if (a.r_min > a.r_max) throw cli::UsageError("empty rank range");
  if (a.r_min < 1) throw cli::UsageError("--r-min must be >= 1");
  cli::RunSpec base = make_spec(a.in, a.solver, false);
  if (!qc::is_truncated(base.method)) throw cli::UsageError("sweep needs a truncated method");
  const cli::Problem problem = cli::load_problem(base.input);
  base.cfg.rank = a.r_max;
  check_rank(base, problem);
  const qc::Mask mask = cli::resolve_mask(base, problem.truth.rows(), problem.truth.cols());

  const std::size_t n = static_cast<std::size_t>(a.r_max - a.r_min + 1);
  std::vector<cli::ReportRow> rows(n);
  cli::parallel_for(n, [&](std::size_t k) {
    cli::RunSpec spec = base;
    spec.cfg.rank = a.r_min + static_cast<qc::Index>(k);
    rows[k] = cli::execute(spec, problem, mask).row;
  });

  std::size_t best = 0;
  bool all_converged = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (rows[k].psnr > rows[best].psnr) best = k;
    all_converged = all_converged && rows[k].converged;
  }
  std::string csv = cli::csv_header();
  for (const auto& row : rows) csv += cli::csv_line(row);
  cli::ReportRow best_row = rows[best];
  best_row.row_type = "best";
  csv += cli::csv_line(best_row);
  emit_report(a.report, csv);
  return all_converged ? kExitOk : kExitUnconverged;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string config;
  std::optional<std::string> report;
  std::optional<std::string> summary;
};

template <typename T>
void read_opt(const nlohmann::json& obj, const char* key, std::optional<T>& dst) {
  if (obj.contains(key)) dst = obj.at(key).get<T>();
}

int run_bench(const BenchArgs& a) {
  nlohmann::json cfg;
  {
    std::ifstream in(a.config);
    if (!in) throw cli::UsageError("cannot open config " + a.config);
    try {
      cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw cli::UsageError(std::string("malformed config: ") + e.what());
    }
  }

  std::vector<std::string> inputs, methods, patterns;
  SolverFlags shared;
  int repeat = 1;
  try {
    inputs = cfg.at("inputs").get<std::vector<std::string>>();
    methods = cfg.at("methods").get<std::vector<std::string>>();
    patterns = cfg.at("patterns").get<std::vector<std::string>>();
    if (cfg.contains("seed")) shared.seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("repeat")) repeat = cfg.at("repeat").get<int>();
    read_opt(cfg, "rank", shared.rank);
    if (cfg.contains("solver")) {
      const auto& s = cfg.at("solver");
      read_opt(s, "rho", shared.rho);
      read_opt(s, "beta0", shared.beta0);
      read_opt(s, "eps1", shared.eps1);
      read_opt(s, "cap", shared.cap);
      read_opt(s, "tol", shared.tol);
      read_opt(s, "inner_tol", shared.inner_tol);
      read_opt(s, "max_outer", shared.max_outer);
      read_opt(s, "max_inner", shared.max_inner);
      read_opt(s, "theta1", shared.theta1);
      read_opt(s, "theta2", shared.theta2);
      read_opt(s, "weight_side", shared.weight_side);
    }
  } catch (const nlohmann::json::exception& e) {
    throw cli::UsageError(std::string("malformed config: ") + e.what());
  }
  if (inputs.empty() || methods.empty() || patterns.empty() || repeat < 1) {
    throw cli::UsageError("config needs nonempty inputs, methods and patterns, and repeat >= 1");
  }

  std::vector<cli::ReportRow> rows;
  for (const auto& input : inputs) {
    const cli::Problem problem = cli::load_problem(input);
    for (const auto& pattern : patterns) {
      InputFlags in{input, std::nullopt, pattern};
      std::optional<qc::Mask> mask;
      for (const auto& method : methods) {
        SolverFlags f = shared;
        f.method = method;
        const cli::RunSpec spec = make_spec(in, f, true);
        check_rank(spec, problem);
        if (!mask) mask = cli::resolve_mask(spec, problem.truth.rows(), problem.truth.cols());
        for (int rep = 0; rep < repeat; ++rep) rows.push_back(cli::execute(spec, problem, *mask).row);
      }
    }
  }

  std::string csv = cli::csv_header();
  bool all_converged = true;
  for (const auto& row : rows) {
    csv += cli::csv_line(row);
    all_converged = all_converged && row.converged;
  }
  emit_report(a.report, csv);

  if (a.summary) {
    struct Acc {
      int runs = 0, converged = 0;
      double wall = 0.0, psnr = 0.0;
    };
    std::map<std::string, Acc> acc;
    for (const auto& row : rows) {
      Acc& s = acc[row.method];
      ++s.runs;
      s.converged += row.converged ? 1 : 0;
      s.wall += row.wall_seconds;
      s.psnr += row.psnr;
    }
    nlohmann::json per_method = nlohmann::json::array();
    for (const auto& method : methods) {
      const Acc& s = acc[method];
      const double mean_psnr = s.psnr / s.runs;
      per_method.push_back({{"method", method},
                            {"runs", s.runs},
                            {"converged_runs", s.converged},
                            {"mean_wall_seconds", s.wall / s.runs},
                            {"mean_psnr", std::isfinite(mean_psnr) ? nlohmann::json(mean_psnr) : nlohmann::json()}});
    }
    nlohmann::json doc{{"tool", "quatcomp"},
                       {"version", QUATCOMP_VERSION},
                       {"total_runs", rows.size()},
                       {"columns", cli::report_columns()},
                       {"methods", std::move(per_method)}};
    cli::write_text_atomically(*a.summary, doc.dump(2) + "\n");
  }
  return all_converged ? kExitOk : kExitUnconverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank quaternion matrix completion for color images"};
  app.set_version_flag("--version", QUATCOMP_VERSION);
  app.require_subcommand(1);

  CompleteArgs complete_args;
  auto* complete = app.add_subcommand("complete", "Recover one image or synthetic matrix");
  add_input_flags(complete, complete_args.in);
  add_solver_flags(complete, complete_args.solver, true);
  complete->add_option("--out,-o", complete_args.out, "Recovered image (.png/.ppm) or matrix (.json)");
  complete->add_option("--report", complete_args.report, "CSV report path (stdout if omitted)");
  complete->add_option("--json", complete_args.json, "JSON report path");

  MaskArgs mask_args;
  auto* mask = app.add_subcommand("mask", "Write a mask file from a pattern");
  mask->add_option("--rows", mask_args.rows, "Grid rows");
  mask->add_option("--cols", mask_args.cols, "Grid columns");
  mask->add_option("--like", mask_args.like, "Take the grid size from an image or synth descriptor");
  mask->add_option("--pattern", mask_args.pattern, "Mask pattern")->required();
  mask->add_option("--seed", mask_args.seed, "Seed for random patterns given without one");
  mask->add_option("--out,-o", mask_args.out, "Output mask (.png or .json)")->required();

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run one truncated method over a range of ranks");
  add_input_flags(sweep, sweep_args.in);
  add_solver_flags(sweep, sweep_args.solver, false);
  sweep->add_option("--r-min", sweep_args.r_min, "Smallest rank")->capture_default_str();
  sweep->add_option("--r-max", sweep_args.r_max, "Largest rank")->capture_default_str();
  sweep->add_option("--report", sweep_args.report, "CSV report path (stdout if omitted)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run the cross product described by a JSON config");
  bench->add_option("--config,-c", bench_args.config, "Benchmark config (JSON)")->required();
  bench->add_option("--report", bench_args.report, "CSV report path (stdout if omitted)");
  bench->add_option("--summary", bench_args.summary, "JSON summary path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == complete) return run_complete(complete_args);
    if (active == mask) return run_mask(mask_args);
    if (active == sweep) return run_sweep(sweep_args);
    if (active == bench) return run_bench(bench_args);
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
