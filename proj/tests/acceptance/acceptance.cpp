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


// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quatcomp/completion.hpp"
#include "quatcomp/image.hpp"
#include "quatcomp/mask_pattern.hpp"
#include "quatcomp/metrics.hpp"
#include "quatcomp/qsvd.hpp"
#include "quatcomp/synthetic.hpp"
#include "support/oracles.hpp"

using namespace quatcomp;

namespace {

// Pinned tolerances and budgets.
constexpr double kAlgebraTol = 1e-12;
constexpr double kEmbedTol = 1e-10;
constexpr double kAlgebraSeconds = 5.0;
constexpr double kQsvdFactorTol = 1e-9;
constexpr double kSigmaTol = 1e-8;
constexpr double kQsvdSeconds = 30.0;
constexpr double kTraceSlack = 1e-8;
constexpr double kTraceEqualityTol = 1e-8;
constexpr double kPerturbation = 1e-2;
constexpr double kShrinkTol = 1e-8;
constexpr double kRankOneRelError = 1e-2;
constexpr double kSyntheticSeconds = 120.0;
constexpr double kStepBoundSlack = 1e-8;
constexpr int kDegenerateIterations = 20;
constexpr double kSsimReferenceTol = 1e-6;
constexpr double kZeroFillMarginDb = 5.0;
constexpr double kEndToEndSeconds = 600.0;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const char* name, Outcome& o) {
  std::printf("criterion %2d %-22s %s %s\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

// Solver runs shared by the synthetic, bound, degeneracy and pinning checks.
struct AuditedRun {
  std::string label;
  QMatrix m;
  Mask mask;
  SolverConfig cfg;
  SolverReport rep;
};
std::vector<AuditedRun> audited;

const SolverReport& record(const std::string& label, Method method, const QMatrix& truth, const Mask& mask,
                           SolverConfig cfg) {
  cfg.keep_iterates = true;
  const QMatrix m = project(truth, mask);
  audited.push_back({label, m, mask, cfg, complete(method, m, mask, cfg)});
  return audited.back().rep;
}

void criterion_algebra() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 gen(1001);
  double worst_norm = 0.0, worst_assoc = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const auto a = oracle::random_quaternion(gen);
    const auto b = oracle::random_quaternion(gen);
    const auto c = oracle::random_quaternion(gen);
    worst_norm = std::max(worst_norm, std::abs(abs(a * b) - abs(a) * abs(b)));
    worst_assoc = std::max(worst_assoc, abs((a * b) * c - a * (b * c)));
  }
  double worst_embed = 0.0;
  std::uniform_int_distribution<int> dim(1, 8);
  for (int t = 0; t < 100; ++t) {
    const Index m = dim(gen), k = dim(gen), n = dim(gen);
    const auto a = oracle::random_matrix(m, k, gen);
    const auto b = oracle::random_matrix(k, n, gen);
    worst_embed = std::max(worst_embed, (embed(a * b) - embed(a) * embed(b)).cwiseAbs().maxCoeff());
  }
  const double secs = since(start);
  o.require(worst_norm <= kAlgebraTol, "norm multiplicativity");
  o.require(worst_assoc <= kAlgebraTol, "associativity");
  o.require(worst_embed <= kEmbedTol, "embed homomorphism");
  o.require(secs < kAlgebraSeconds, "runtime");
  o.detail << "max|ab|-|a||b|=" << worst_norm << " max assoc=" << worst_assoc << " max embed=" << worst_embed
           << " time=" << secs << "s";
  report(1, "algebra", o);
}

void criterion_qsvd() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 gen(1002);
  std::uniform_int_distribution<int> dim(1, 32);
  double worst_rec = 0.0, worst_unit = 0.0, worst_sigma = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index m = dim(gen), n = dim(gen);
    const auto a = oracle::random_matrix(m, n, gen);
    const auto f = qsvd(a);
    QMatrix s(m, n);
    for (Index k = 0; k < f.sigma.size(); ++k) s.plane(0)(k, k) = f.sigma(k);
    const double rec = (f.u * s * conj_transpose(f.v) - a).frobenius_norm() / std::max(1.0, a.frobenius_norm());
    const double unit =
        std::max((conj_transpose(f.u) * f.u - QMatrix::identity(m)).frobenius_norm() / static_cast<double>(m),
                 (conj_transpose(f.v) * f.v - QMatrix::identity(n)).frobenius_norm() / static_cast<double>(n));
    worst_rec = std::max(worst_rec, rec);
    worst_unit = std::max(worst_unit, unit);
    worst_sigma = std::max(worst_sigma, (f.sigma - oracle::real_adjoint_sigma(a)).cwiseAbs().maxCoeff());
  }
  const double secs = since(start);
  o.require(worst_rec <= kQsvdFactorTol, "reconstruction");
  o.require(worst_unit <= kQsvdFactorTol, "unitarity");
  o.require(worst_sigma <= kSigmaTol, "sigma vs real representation");
  o.require(secs < kQsvdSeconds, "runtime");
  o.detail << "rec/max(1,|A|)=" << worst_rec << " unit/dim=" << worst_unit << " sigma err=" << worst_sigma
           << " time=" << secs << "s";
  report(2, "qsvd", o);
}

void criterion_trace_bound() {
  Outcome o;
  std::mt19937_64 gen(1003);
  const auto x = oracle::random_matrix(7, 6, gen);
  const auto sigma = oracle::real_adjoint_sigma(x);
  double min_slack = std::numeric_limits<double>::infinity();
  double worst_eq = 0.0;
  for (Index r : {1, 2, 4}) {
    const double bound = sigma.head(r).sum();
    for (int t = 0; t < 200; ++t) {
      const auto a = oracle::orthonormal_rows(r, 7, gen);
      const auto b = oracle::orthonormal_rows(r, 6, gen);
      min_slack = std::min(min_slack, bound - trace_functional(a, x, b));
    }
    const auto tf = truncated_factors(x, r);
    worst_eq = std::max(worst_eq, std::abs(trace_functional(tf.c, x, tf.d) - bound));
  }
  o.require(min_slack >= -kTraceSlack, "bound slack");
  o.require(worst_eq <= kTraceEqualityTol, "equality at singular vectors");
  o.detail << "min slack=" << min_slack << " equality err=" << worst_eq;
  report(3, "trace bound", o);
}

void criterion_qsvt() {
  Outcome o;
  std::mt19937_64 gen(1004);
  int beaten = 0, trials = 0;
  double worst_shrink = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto t = oracle::random_matrix(6, 5, gen);
    const auto sigma = oracle::real_adjoint_sigma(t);
    for (double tau : {0.1, 1.0, 5.0}) {
      const auto x = qsvt(t, tau);
      auto f = [&](const QMatrix& z) {
        return tau * oracle::oracle_nuclear_norm(z) + 0.5 * (z - t).squared_norm();
      };
      const double fx = f(x);
      for (int p = 0; p < 100; ++p) {
        auto e = oracle::random_matrix(6, 5, gen);
        e *= kPerturbation / e.frobenius_norm();
        ++trials;
        if (fx < f(x + e)) ++beaten;
      }
      const auto out = oracle::real_adjoint_sigma(x);
      for (Index k = 0; k < sigma.size(); ++k) {
        worst_shrink = std::max(worst_shrink, std::abs(out(k) - std::max(sigma(k) - tau, 0.0)));
      }
    }
  }
  o.require(beaten == trials, "perturbations");
  o.require(worst_shrink <= kShrinkTol, "shrunk spectrum");
  o.detail << "optimal against " << beaten << "/" << trials << " perturbations, spectrum err=" << worst_shrink;
  report(4, "qsvt optimality", o);
}

void criterion_synthetic() {
  Outcome o;
  const auto start = Clock::now();

  std::mt19937_64 gen(1005);
  auto u = oracle::random_matrix(20, 1, gen);
  auto v = oracle::random_matrix(20, 1, gen);
  u *= 1.0 / u.frobenius_norm();
  v *= 1.0 / v.frobenius_norm();
  const QMatrix rank1 = 10.0 * (u * conj_transpose(v));
  const Mask mask1 = make_mask(RandomPattern{0.4, 1006}, 20, 20);
  auto cfg1 = SolverConfig::qtnn_defaults();
  cfg1.rank = 1;
  const double err1 = relative_error(rank1, record("qtnn rank-1", Method::Qtnn, rank1, mask1, cfg1).recovered);

  const QMatrix rank3 = make_low_rank(SyntheticSpec{60, 60, 3, 100.0, 1007});
  const Mask mask3 = make_mask(RandomPattern{0.5, 1008}, 60, 60);
  auto qcfg = SolverConfig::qtnn_defaults();
  qcfg.rank = 3;
  auto dcfg = SolverConfig::dwqtnn_defaults();
  dcfg.rank = 3;
  const auto& q = record("qtnn rank-3", Method::Qtnn, rank3, mask3, qcfg);
  const bool q_conv = q.converged;
  const double q_time = q.wall_seconds;
  const auto& d = record("dwqtnn rank-3", Method::Dwqtnn, rank3, mask3, dcfg);
  const double secs = since(start);

  o.require(err1 <= kRankOneRelError, "rank-1 relative error");
  o.require(q_conv, "qtnn converged");
  o.require(d.converged, "dwqtnn converged");
  o.require(d.wall_seconds < q_time, "dwqtnn faster than qtnn");
  o.require(secs < kSyntheticSeconds, "runtime");
  o.detail << "rank-1 rel err=" << err1 << " qtnn " << q_time << "s vs dwqtnn " << d.wall_seconds
           << "s (iterations " << audited[1].rep.outer_iterations << "/" << d.outer_iterations << ") time=" << secs
           << "s";
  report(5, "synthetic recovery", o);
}

void criterion_degeneracy_runs(Outcome& o) {
  const QMatrix truth = make_low_rank(SyntheticSpec{40, 40, 2, 100.0, 1009});
  const Mask mask = make_mask(RandomPattern{0.5, 1010}, 40, 40);
  auto cfg = SolverConfig::dwqtnn_defaults();
  cfg.rank = 2;
  cfg.theta1 = cfg.theta2 = 1.5;
  cfg.rng_seed = 1011;
  cfg.outer_tol = 1e-300;
  cfg.max_outer = kDegenerateIterations + 5;
  const auto& a = record("dwqtnn equal thetas", Method::Dwqtnn, truth, mask, cfg);
  const auto& b = record("wqtnn", Method::Wqtnn, truth, mask, cfg);
  std::size_t same = 0;
  while (same < a.iterates.size() && same < b.iterates.size() && a.iterates[same] == b.iterates[same]) ++same;
  o.require(same >= static_cast<std::size_t>(kDegenerateIterations) && same == a.iterates.size() &&
                a.iterates.size() == b.iterates.size(),
            "bitwise trajectories");
  const auto w = build_weights(mask, 0.0, 0.0);
  const bool identity = w.w1 == Eigen::VectorXd::Ones(40) && w.w2 == Eigen::VectorXd::Ones(40);
  o.require(identity, "theta = 0 identity");

  auto zero_cfg = SolverConfig::dwqtnn_defaults();
  zero_cfg.rank = 2;
  zero_cfg.theta1 = zero_cfg.theta2 = 0.0;
  const auto& z = record("dwqtnn theta 0", Method::Dwqtnn, truth, mask, zero_cfg);
  o.require(z.weights.w1 == Eigen::VectorXd::Ones(40) && z.weights.w2 == Eigen::VectorXd::Ones(40),
            "solver identity weights");
  o.detail << "identical iterates=" << same << " theta0 identity=" << (identity ? "yes" : "no");
}

void criterion_step_bound() {
  Outcome o;
  int checked = 0;
  for (const auto& run : audited) {
    if (run.rep.method != Method::Dwqtnn || !run.rep.converged) continue;
    ++checked;
    const auto& w = run.rep.weights;
    const bool steps = step_bound_check(run.rep, w.w1, w.w2, run.cfg.rank);
    const long long bound =
        iteration_bound(run.cfg.step_seed, run.cfg.rho, run.cfg.outer_tol * run.rep.observed_norm, w.w1, w.w2,
                        run.m.rows(), run.cfg.rank);
    o.require(steps, run.label + " step bound");
    o.require(run.rep.outer_iterations <= bound, run.label + " iteration bound");
    // Independent restatement of the per-step inequality.
    const double c = w.w1.norm() * std::sqrt(double(run.m.rows())) + w.w2.norm() * std::sqrt(double(run.cfg.rank));
    for (std::size_t k = 0; k < run.rep.raw_step_norms.size(); ++k) {
      if (!(run.rep.raw_step_norms[k] <= c / run.rep.penalties[k] + kStepBoundSlack)) {
        o.require(false, run.label + " replayed step " + std::to_string(k));
        break;
      }
    }
    o.detail << run.label << ": " << run.rep.outer_iterations << " <= " << bound << "; ";
  }
  o.require(checked > 0, "at least one converged run");
  report(6, "step bound", o);
}

void criterion_pinning() {
  Outcome o;
  std::mt19937_64 gen(1012);
  long audited_entries = 0;
  for (const auto& run : audited) {
    std::vector<const QMatrix*> states{&run.rep.recovered};
    for (const auto& it : run.rep.iterates) states.push_back(&it);
    bool ok = true;
    for (const QMatrix* x : states) {
      ok = ok && observed_entries_match(*x, run.m, run.mask);
      // Random spot checks of individual observed entries and components.
      std::uniform_int_distribution<Index> ri(0, run.m.rows() - 1), ci(0, run.m.cols() - 1);
      for (int s = 0; s < 50; ++s) {
        const Index i = ri(gen), j = ci(gen);
        if (!run.mask.observed(i, j)) continue;
        ++audited_entries;
        for (int p = 0; p < 4; ++p) {
          ok = ok && std::memcmp(&x->plane(p)(i, j), &run.m.plane(p)(i, j), sizeof(double)) == 0;
        }
      }
    }
    o.require(ok, run.label);
  }
  o.detail << audited.size() << " runs, " << audited_entries << " spot-checked entries";
  report(8, "observed pinning", o);
}

void criterion_metrics() {
  Outcome o;
  std::mt19937_64 gen(1013);
  const auto x = oracle::random_image(32, 32, gen);
  RgbImage black(32, 32), white(32, 32);
  std::fill(white.pixels.begin(), white.pixels.end(), 255);
  const double p_same = psnr(x, x);
  const double p_full = psnr(black, white);
  const double s_same = ssim(x, x);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto a = oracle::random_image(40, 36, gen);
    auto b = a;
    std::normal_distribution<double> noise(0.0, 15.0 + 3.0 * t);
    for (auto& v : b.pixels) v = static_cast<std::uint8_t>(std::clamp(std::round(v + noise(gen)), 0.0, 255.0));
    worst = std::max(worst, std::abs(ssim(a, b) - oracle::reference_ssim(a, b)));
  }
  o.require(p_same == std::numeric_limits<double>::infinity(), "psnr identical");
  o.require(p_full == 0.0, "psnr 255 difference");
  o.require(s_same == 1.0, "ssim identical");
  o.require(worst <= kSsimReferenceTol, "ssim reference");
  o.detail << "psnr(X,X)=" << p_same << " psnr(0,255)=" << p_full << " ssim(X,X)=" << s_same
           << " ssim ref err=" << worst;
  report(9, "metrics", o);
}

void criterion_end_to_end() {
  Outcome o;
  const auto start = Clock::now();
  const RgbImage img = make_test_image(300, 300, 2024);
  const QMatrix truth = encode(img);
  const Mask mask = make_mask(RandomPattern{0.5, 2025}, 300, 300);
  const QMatrix observed = project(truth, mask);
  const double zero_fill = psnr(img, decode(observed));

  auto qcfg = SolverConfig::qtnn_defaults();
  qcfg.rank = 3;
  const auto q = qtnn_complete(observed, mask, qcfg);
  const double q_psnr = psnr(img, decode(q.recovered));
  const auto b = qnn_svt_baseline(observed, mask, SolverConfig::baseline_defaults());
  const double b_psnr = psnr(img, decode(b.recovered));
  const double secs = since(start);

  o.require(q_psnr >= zero_fill + kZeroFillMarginDb, "margin over zero fill");
  o.require(q_psnr > b_psnr, "beats qnn baseline");
  o.require(observed_entries_match(q.recovered, observed, mask), "pinning");
  o.require(secs < kEndToEndSeconds, "runtime");
  o.detail << "zero-fill=" << zero_fill << "dB qtnn=" << q_psnr << "dB (" << q.outer_iterations
           << " outer) baseline=" << b_psnr << "dB time=" << secs << "s";
  report(10, "end to end", o);
}

}  // namespace

int main() {
  audited.reserve(16);
  criterion_algebra();
  criterion_qsvd();
  criterion_trace_bound();
  criterion_qsvt();
  criterion_synthetic();
  Outcome degeneracy;
  criterion_degeneracy_runs(degeneracy);
  criterion_step_bound();
  report(7, "degeneracy", degeneracy);
  criterion_pinning();
  criterion_metrics();
  criterion_end_to_end();
  std::printf("%s: %d criterion failure(s)\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
