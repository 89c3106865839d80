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

#include "quatcomp/mask.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "quatcomp/errors.hpp"

namespace quatcomp {
namespace {

void require_mask_shape(const QMatrix& a, const Mask& mask, const char* what) {
  if (a.rows() != mask.rows() || a.cols() != mask.cols()) {
    throw DimensionError(std::string(what) + ": mask shape differs from matrix shape");
  }
}

}  // namespace

Mask::Mask(Index rows, Index cols, bool observed)
    : rows_(rows), cols_(cols), bits_(static_cast<std::size_t>(rows * cols), observed ? 1 : 0) {
  if (rows < 0 || cols < 0) throw DimensionError("Mask: negative dimensions");
}

Index Mask::observed_count() const {
  return static_cast<Index>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Eigen::VectorXd Mask::row_observed_counts() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rows_);
  for (Index j = 0; j < cols_; ++j)
    for (Index i = 0; i < rows_; ++i) out(i) += observed(i, j) ? 1.0 : 0.0;
  return out;
}

Eigen::VectorXd Mask::col_observed_counts() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cols_);
  for (Index j = 0; j < cols_; ++j)
    for (Index i = 0; i < rows_; ++i) out(j) += observed(i, j) ? 1.0 : 0.0;
  return out;
}

Mask Mask::complement() const {
  Mask out = *this;
  for (auto& b : out.bits_) b = b ? 0 : 1;
  return out;
}

Mask Mask::unite(const Mask& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("Mask::unite: shapes differ");
  Mask out = *this;
  for (std::size_t t = 0; t < bits_.size(); ++t) out.bits_[t] = (bits_[t] | other.bits_[t]) ? 1 : 0;
  return out;
}

QMatrix project(const QMatrix& a, const Mask& mask) {
  require_mask_shape(a, mask, "project");
  QMatrix out(a.rows(), a.cols());
  pin_observed(out, a, mask);
  return out;
}

void pin_observed(QMatrix& x, const QMatrix& m, const Mask& mask) {
  require_mask_shape(x, mask, "pin_observed");
  require_mask_shape(m, mask, "pin_observed");
  for (std::size_t p = 0; p < 4; ++p) {
    double* dst = x.plane(p).data();
    const double* src = m.plane(p).data();
    for (Index j = 0; j < mask.cols(); ++j) {
      for (Index i = 0; i < mask.rows(); ++i) {
        if (mask.observed(i, j)) {
          const Index t = j * mask.rows() + i;
          dst[t] = src[t];
        }
      }
    }
  }
}

bool observed_entries_match(const QMatrix& x, const QMatrix& m, const Mask& mask) {
  require_mask_shape(x, mask, "observed_entries_match");
  require_mask_shape(m, mask, "observed_entries_match");
  for (std::size_t p = 0; p < 4; ++p) {
    const double* a = x.plane(p).data();
    const double* b = m.plane(p).data();
    for (Index j = 0; j < mask.cols(); ++j) {
      for (Index i = 0; i < mask.rows(); ++i) {
        const Index t = j * mask.rows() + i;
        if (mask.observed(i, j) && std::memcmp(a + t, b + t, sizeof(double)) != 0) return false;
      }
    }
  }
  return true;
}

}  // namespace quatcomp
