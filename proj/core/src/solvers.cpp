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
#include <chrono>
#include <cmath>
#include <sstream>

#include "quatcomp/completion.hpp"
#include "quatcomp/errors.hpp"
#include "quatcomp/qsvd.hpp"

namespace quatcomp {
namespace {

using Clock = std::chrono::steady_clock;

void require_problem_shape(const QMatrix& m, const Mask& mask) {
  if (m.rows() != mask.rows() || m.cols() != mask.cols()) {
    throw DimensionError("solver: mask shape differs from data shape");
  }
  if (m.rows() < 1 || m.cols() < 1) throw DimensionError("solver: empty data matrix");
}

void require_rank(const QMatrix& m, Index r) {
  const Index k = std::min(m.rows(), m.cols());
  if (r < 1 || r > k) {
    throw PreconditionError("solver: truncation rank " + std::to_string(r) + " outside [1, " +
                            std::to_string(k) + "]");
  }
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Starts a report at X_1 = P_Omega(M). Returns false when P_Omega(M) is zero,
// in which case the zero matrix is already the answer.
bool start_report(SolverReport& rep, Method method, const QMatrix& m, const Mask& mask) {
  rep.method = method;
  rep.recovered = project(m, mask);
  rep.observed_norm = rep.recovered.frobenius_norm();
  if (rep.observed_norm == 0.0) {
    rep.converged = true;
    return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Qtnn: return "qtnn";
    case Method::Wqtnn: return "wqtnn";
    case Method::Dwqtnn: return "dwqtnn";
    case Method::QnnBaseline: return "qnn-baseline";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::Qtnn, Method::Wqtnn, Method::Dwqtnn, Method::QnnBaseline}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

bool is_truncated(Method m) { return m != Method::QnnBaseline; }

SolverConfig SolverConfig::qtnn_defaults() {
  SolverConfig c;
  c.rho = 1.25;
  c.step_seed = 0.005;
  c.step_cap = 1e7;
  c.outer_tol = 1e-3;
  return c;
}

SolverConfig SolverConfig::dwqtnn_defaults() {
  SolverConfig c;
  c.rho = 1.2;
  c.step_seed = 0.0015;
  c.step_cap = 1e7;
  c.outer_tol = 1e-4;
  c.max_outer = 500;
  c.theta1 = 2.0;
  c.theta2 = 1.5;
  return c;
}

SolverConfig SolverConfig::wqtnn_defaults() {
  SolverConfig c = dwqtnn_defaults();
  c.theta2 = c.theta1;
  return c;
}

SolverConfig SolverConfig::baseline_defaults() {
  SolverConfig c = qtnn_defaults();
  c.max_outer = 500;
  return c;
}

SolverConfig SolverConfig::defaults_for(Method m) {
  switch (m) {
    case Method::Qtnn: return qtnn_defaults();
    case Method::Wqtnn: return wqtnn_defaults();
    case Method::Dwqtnn: return dwqtnn_defaults();
    case Method::QnnBaseline: return baseline_defaults();
  }
  return qtnn_defaults();
}

void SolverConfig::validate() const {
  std::ostringstream err;
  if (!(rho > 1.0) || !std::isfinite(rho)) err << "rho must be > 1; ";
  if (!(step_seed > 0.0) || !(step_seed <= step_cap) || !std::isfinite(step_cap)) {
    err << "need 0 < step seed <= step cap; ";
  }
  if (!(outer_tol > 0.0) || !(inner_tol > 0.0)) err << "tolerances must be > 0; ";
  if (max_outer < 1 || max_inner < 1) err << "iteration limits must be >= 1; ";
  if (!(theta1 >= 0.0) || !(theta2 >= 0.0)) err << "weights theta must be >= 0; ";
  if (!err.str().empty()) throw PreconditionError("SolverConfig: " + err.str());
}

SolverReport qtnn_complete(const QMatrix& m, const Mask& mask, const SolverConfig& cfg) {
  cfg.validate();
  require_problem_shape(m, mask);
  require_rank(m, cfg.rank);
  const auto start = Clock::now();

  SolverReport rep;
  if (!start_report(rep, Method::Qtnn, m, mask)) return rep;
  const double scale = rep.observed_norm;
  QMatrix x = rep.recovered;

  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    const TruncatedFactors tf = truncated_factors(x, cfg.rank);
    rep.objectives.push_back(truncated_nuclear_norm(tf.sigma, cfg.rank));
    const QMatrix ctd = mat_mul(conj_transpose(tf.c), tf.d);

    // Inner ADMM, warm-started at the current outer iterate.
    QMatrix xi = x;
    QMatrix h = x;
    QMatrix y = x;
    double beta = cfg.step_seed;
    for (int inner = 1; inner <= cfg.max_inner; ++inner) {
      const double inv_beta = 1.0 / beta;
      const QMatrix target = h - inv_beta * y;
      QMatrix next = qsvt(target, inv_beta);
      if (cfg.on_proximal_step) {
        cfg.on_proximal_step(ProximalStep{outer, inner, xi, target, inv_beta, next});
      }
      h = next + inv_beta * (ctd + y);
      pin_observed(h, m, mask);
      const QMatrix gap = next - h;
      y += beta * gap;
      rep.penalties.push_back(beta);
      beta = std::min(cfg.rho * beta, cfg.step_cap);
      ++rep.inner_iterations;
      xi = std::move(next);
      if (gap.frobenius_norm() / scale <= cfg.inner_tol) break;
    }

    pin_observed(xi, m, mask);
    const double residual = (xi - x).frobenius_norm() / scale;
    rep.residuals.push_back(residual);
    x = std::move(xi);
    rep.outer_iterations = outer;
    if (cfg.keep_iterates) rep.iterates.push_back(x);
    if (residual <= cfg.outer_tol) {
      rep.converged = true;
      break;
    }
  }

  rep.recovered = std::move(x);
  rep.wall_seconds = seconds_since(start);
  return rep;
}

namespace {

SolverReport one_step_descent(Method method, const QMatrix& m, const Mask& mask,
                              const SolverConfig& cfg, WeightSpec weights) {
  cfg.validate();
  require_problem_shape(m, mask);
  require_rank(m, cfg.rank);
  const auto start = Clock::now();

  SolverReport rep;
  rep.weights = std::move(weights);
  if (!start_report(rep, method, m, mask)) return rep;
  const double scale = rep.observed_norm;
  rep.iteration_bound = iteration_bound(cfg.step_seed, cfg.rho, cfg.outer_tol * scale,
                                        rep.weights.w1, rep.weights.w2, m.rows(), cfg.rank);
  const bool row_side = rep.weights.side == WeightSide::Rows;

  QMatrix x = rep.recovered;
  double eps = cfg.step_seed;
  for (int k = 1; k <= cfg.max_outer; ++k) {
    const TruncatedFactors tf = truncated_factors(x, cfg.rank);
    rep.objectives.push_back(truncated_nuclear_norm(tf.sigma, cfg.rank));
    const QMatrix full = mat_mul(conj_transpose(tf.a), tf.b);
    const QMatrix lead = mat_mul(conj_transpose(tf.c), tf.d);
    QMatrix direction = row_side ? scale_rows(rep.weights.w1, full) - scale_rows(rep.weights.w2, lead)
                                 : scale_cols(full, rep.weights.w1) - scale_cols(lead, rep.weights.w2);
    const double step = 1.0 / eps;
    direction *= step;
    rep.penalties.push_back(eps);
    rep.step_sizes.push_back(step);
    rep.raw_step_norms.push_back(direction.frobenius_norm());

    QMatrix next = x - direction;
    pin_observed(next, m, mask);
    const double residual = (next - x).frobenius_norm() / scale;
    rep.residuals.push_back(residual);
    x = std::move(next);
    rep.outer_iterations = k;
    if (cfg.keep_iterates) rep.iterates.push_back(x);
    eps = std::min(cfg.rho * eps, cfg.step_cap);
    if (residual <= cfg.outer_tol) {
      rep.converged = true;
      break;
    }
  }

  rep.recovered = std::move(x);
  rep.wall_seconds = seconds_since(start);
  return rep;
}

}  // namespace

SolverReport dwqtnn_complete(const QMatrix& m, const Mask& mask, const SolverConfig& cfg) {
  require_problem_shape(m, mask);
  return one_step_descent(Method::Dwqtnn, m, mask, cfg,
                          build_weights(mask, cfg.theta1, cfg.theta2, cfg.weight_side));
}

SolverReport wqtnn_complete(const QMatrix& m, const Mask& mask, const SolverConfig& cfg) {
  require_problem_shape(m, mask);
  return one_step_descent(Method::Wqtnn, m, mask, cfg,
                          build_weights(mask, cfg.theta1, cfg.theta1, cfg.weight_side));
}

SolverReport qnn_svt_baseline(const QMatrix& m, const Mask& mask, const SolverConfig& cfg) {
  cfg.validate();
  require_problem_shape(m, mask);
  const auto start = Clock::now();

  SolverReport rep;
  if (!start_report(rep, Method::QnnBaseline, m, mask)) return rep;
  const double scale = rep.observed_norm;

  QMatrix x = rep.recovered;
  double beta = cfg.step_seed;
  for (int k = 1; k <= cfg.max_outer; ++k) {
    const double tau = 1.0 / beta;
    QsvtResult shrunk = qsvt_with_spectrum(x, tau);
    if (cfg.on_proximal_step) {
      cfg.on_proximal_step(ProximalStep{k, 1, x, x, tau, shrunk.value});
    }
    rep.objectives.push_back(shrunk.shrunk_sigma.sum());
    // A threshold above sigma_max maps everything back onto P_Omega(M); that
    // is a stall, not convergence.
    const bool annihilated = shrunk.shrunk_sigma.size() == 0 || shrunk.shrunk_sigma(0) == 0.0;
    QMatrix next = std::move(shrunk.value);
    pin_observed(next, m, mask);
    const double residual = (next - x).frobenius_norm() / scale;
    rep.residuals.push_back(residual);
    rep.penalties.push_back(beta);
    x = std::move(next);
    rep.outer_iterations = k;
    rep.inner_iterations = k;
    if (cfg.keep_iterates) rep.iterates.push_back(x);
    beta = std::min(cfg.rho * beta, cfg.step_cap);
    if (!annihilated && residual <= cfg.outer_tol) {
      rep.converged = true;
      break;
    }
  }

  rep.recovered = std::move(x);
  rep.wall_seconds = seconds_since(start);
  return rep;
}

SolverReport complete(Method method, const QMatrix& m, const Mask& mask, const SolverConfig& cfg) {
  switch (method) {
    case Method::Qtnn: return qtnn_complete(m, mask, cfg);
    case Method::Wqtnn: return wqtnn_complete(m, mask, cfg);
    case Method::Dwqtnn: return dwqtnn_complete(m, mask, cfg);
    case Method::QnnBaseline: return qnn_svt_baseline(m, mask, cfg);
  }
  throw PreconditionError("complete: unknown method");
}

long long iteration_bound(double eps1, double rho, double tol, double w1_norm, double w2_norm,
                          Index rows, Index r) {
  if (!(eps1 > 0.0) || !(rho > 1.0) || !(tol > 0.0)) {
    throw PreconditionError("iteration_bound: need eps1 > 0, rho > 1, tol > 0");
  }
  const double c = w1_norm * std::sqrt(static_cast<double>(rows)) +
                   w2_norm * std::sqrt(static_cast<double>(r));
  const double k = std::ceil(1.0 - (std::log(eps1 * tol) - std::log(c)) / std::log(rho));
  return std::max(1LL, static_cast<long long>(k));
}

long long iteration_bound(double eps1, double rho, double tol, const Eigen::VectorXd& w1,
                          const Eigen::VectorXd& w2, Index rows, Index r) {
  return iteration_bound(eps1, rho, tol, w1.norm(), w2.norm(), rows, r);
}

bool step_bound_check(const SolverReport& report, const Eigen::VectorXd& w1,
                      const Eigen::VectorXd& w2, Index r) {
  const auto n = static_cast<std::size_t>(report.outer_iterations);
  if (report.raw_step_norms.size() != n || report.step_sizes.size() != n) {
    throw ContractError("step_bound_check: report has no one-step update history");
  }
  const double c = w1.norm() * std::sqrt(static_cast<double>(report.recovered.rows())) +
                   w2.norm() * std::sqrt(static_cast<double>(r));
  for (std::size_t k = 0; k < n; ++k) {
    if (!(report.raw_step_norms[k] <= report.step_sizes[k] * c + 1e-8)) return false;
  }
  return true;
}

}  // namespace quatcomp
