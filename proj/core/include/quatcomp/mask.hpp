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
#include <vector>

#include <Eigen/Dense>

#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

/// Observation set over an M x N grid. A position is either observed or
/// missing; the same mask applies to all four quaternion components.
class Mask {
 public:
  Mask() = default;
  /// All positions observed (or all missing when `observed` is false).
  Mask(Index rows, Index cols, bool observed = true);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  bool observed(Index i, Index j) const { return bits_[static_cast<std::size_t>(j * rows_ + i)] != 0; }
  void set_observed(Index i, Index j, bool value) {
    bits_[static_cast<std::size_t>(j * rows_ + i)] = value ? 1 : 0;
  }

  Index observed_count() const;
  Index missing_count() const { return rows_ * cols_ - observed_count(); }
  bool fully_observed() const { return observed_count() == rows_ * cols_; }

  /// Observed entries per row (length M) and per column (length N).
  Eigen::VectorXd row_observed_counts() const;
  Eigen::VectorXd col_observed_counts() const;

  Mask complement() const;
  /// Positions observed in either mask.
  Mask unite(const Mask& other) const;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  // Column-major, matching the QMatrix planes.
  std::vector<std::uint8_t> bits_;
};

/// Keeps the entries on the mask and zeroes the rest.
QMatrix project(const QMatrix& a, const Mask& mask);

/// Overwrites the observed entries of `x` with the corresponding entries of
/// `m` (a bitwise copy). Unobserved entries are untouched.
void pin_observed(QMatrix& x, const QMatrix& m, const Mask& mask);

/// True if x and m agree bitwise on every observed entry.
bool observed_entries_match(const QMatrix& x, const QMatrix& m, const Mask& mask);

}  // namespace quatcomp
