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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "quatcomp/mask.hpp"
#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

enum class WeightSide { Rows, Cols };

/// Diagonal weights for the one-step solvers.
///
/// Each diagonal entry is theta * (2 - observed / length) where `observed`
/// counts the observed entries of the row (or column) and `length` is that
/// line's length, so entries lie in [theta, 2 * theta] and sparser lines get
/// larger weights. theta == 0 selects the identity.
struct WeightSpec {
  double theta1 = 0.0;
  double theta2 = 0.0;
  WeightSide side = WeightSide::Rows;
  Eigen::VectorXd w1;
  Eigen::VectorXd w2;
};

WeightSpec build_weights(const Mask& mask, double theta1, double theta2,
                         WeightSide side = WeightSide::Rows);

Eigen::VectorXd weight_diagonal(const Mask& mask, double theta, WeightSide side);

enum class Method { Qtnn, Wqtnn, Dwqtnn, QnnBaseline };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);
bool is_truncated(Method m);

/// Snapshot passed to SolverConfig::on_proximal_step after every singular
/// value thresholding step of the ADMM-based solvers.
struct ProximalStep {
  int outer;
  int inner;
  const QMatrix& previous;  // iterate before the step
  const QMatrix& target;    // matrix being thresholded
  double tau;
  const QMatrix& result;
};

struct SolverConfig {
  Index rank = 1;
  double rho = 1.25;
  /// beta_0 for the ADMM solvers, eps_1 for the one-step solvers.
  double step_seed = 0.005;
  /// beta_max or eps_max.
  double step_cap = 1e7;
  double outer_tol = 1e-3;
  double inner_tol = 1e-4;
  int max_outer = 100;
  int max_inner = 50;
  double theta1 = 2.0;
  double theta2 = 1.5;
  WeightSide weight_side = WeightSide::Rows;
  std::uint64_t rng_seed = 0;
  /// Keep a copy of every outer iterate in the report.
  bool keep_iterates = false;
  std::function<void(const ProximalStep&)> on_proximal_step;

  static SolverConfig qtnn_defaults();
  static SolverConfig wqtnn_defaults();
  static SolverConfig dwqtnn_defaults();
  static SolverConfig baseline_defaults();
  static SolverConfig defaults_for(Method m);

  /// Throws PreconditionError on out-of-range tunables.
  void validate() const;
};

struct SolverReport {
  Method method = Method::Qtnn;
  QMatrix recovered;
  int outer_iterations = 0;
  int inner_iterations = 0;
  /// ||X_{k+1} - X_k||_F / ||P_Omega(M)||_F for every outer step.
  std::vector<double> residuals;
  /// Truncated nuclear norm of each outer iterate (nuclear norm for the
  /// baseline), taken from the decomposition the step already computes.
  std::vector<double> objectives;
  /// beta_k or eps_k at every step that used one, in order.
  std::vector<double> penalties;
  /// One-step solvers: 1 / eps_k and ||X_k - X_{k+1}||_F before the observed
  /// entries are restored.
  std::vector<double> step_sizes;
  std::vector<double> raw_step_norms;
  std::vector<QMatrix> iterates;
  double observed_norm = 0.0;
  double wall_seconds = 0.0;
  bool converged = false;
  WeightSpec weights;
  /// One-step solvers: iteration count after which the step bound guarantees
  /// a step below outer_tol * observed_norm.
  std::optional<long long> iteration_bound;
};

/// Two-level solver: the outer loop refreshes the leading singular factors of
/// the current iterate; the inner loop runs ADMM on
///   ||X||_* - Re tr(C X D^H)   s.t.  X = H,  P_Omega(H) = P_Omega(M).
SolverReport qtnn_complete(const QMatrix& m, const Mask& mask, const SolverConfig& cfg);

/// One-step weighted descent with separate weights on the full polar factor
/// and on its rank-r leading part:
///   X_{k+1} = X_k - (W1 A^H B - W2 C^H D) / eps_k, observed entries restored.
SolverReport dwqtnn_complete(const QMatrix& m, const Mask& mask, const SolverConfig& cfg);

/// dwqtnn_complete with a single weight built from theta1 for both terms.
SolverReport wqtnn_complete(const QMatrix& m, const Mask& mask, const SolverConfig& cfg);

/// Untruncated reference: X_{k+1} = restore(qsvt(X_k, 1 / beta_k)).
SolverReport qnn_svt_baseline(const QMatrix& m, const Mask& mask, const SolverConfig& cfg);

SolverReport complete(Method method, const QMatrix& m, const Mask& mask, const SolverConfig& cfg);

/// Smallest k >= 1 with c / (rho^(k-1) * eps1) <= tol, where
/// c = ||W1||_F sqrt(rows) + ||W2||_F sqrt(r):
///   ceil(1 - (ln(eps1 * tol) - ln c) / ln rho), clamped below at 1.
long long iteration_bound(double eps1, double rho, double tol, double w1_norm, double w2_norm,
                          Index rows, Index r);
long long iteration_bound(double eps1, double rho, double tol, const Eigen::VectorXd& w1,
                          const Eigen::VectorXd& w2, Index rows, Index r);

/// Checks every recorded one-step update against
///   ||dX_k||_F <= (||W1||_F sqrt(M) + ||W2||_F sqrt(r)) / eps_k + 1e-8.
/// Throws ContractError if the report has no step history for its iterations.
bool step_bound_check(const SolverReport& report, const Eigen::VectorXd& w1,
                      const Eigen::VectorXd& w2, Index r);

}  // namespace quatcomp
