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

#include <cmath>

#include "quatcomp/completion.hpp"
#include "quatcomp/errors.hpp"

namespace quatcomp {

Eigen::VectorXd weight_diagonal(const Mask& mask, double theta, WeightSide side) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw PreconditionError("weight_diagonal: theta must be finite and nonnegative");
  }
  const bool rows = side == WeightSide::Rows;
  const Index lines = rows ? mask.rows() : mask.cols();
  if (theta == 0.0) return Eigen::VectorXd::Ones(lines);

  const Eigen::VectorXd counts = rows ? mask.row_observed_counts() : mask.col_observed_counts();
  const double length = static_cast<double>(rows ? mask.cols() : mask.rows());
  return (theta * (2.0 - counts.array() / length)).matrix();
}

WeightSpec build_weights(const Mask& mask, double theta1, double theta2, WeightSide side) {
  WeightSpec w;
  w.theta1 = theta1;
  w.theta2 = theta2;
  w.side = side;
  w.w1 = weight_diagonal(mask, theta1, side);
  w.w2 = weight_diagonal(mask, theta2, side);
  return w;
}

}  // namespace quatcomp
