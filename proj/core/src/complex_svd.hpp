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

#include <Eigen/Dense>

namespace quatcomp::detail {

struct ComplexSvd {
  Eigen::MatrixXcd u;  // 2M x 2M
  Eigen::VectorXd s;   // descending, length min(rows, cols)
  Eigen::MatrixXcd v;  // 2N x 2N
};

// Full dense SVD of a complex matrix. Throws DecompositionError if the
// backend reports failure.
ComplexSvd complex_svd(const Eigen::MatrixXcd& a);

}  // namespace quatcomp::detail
