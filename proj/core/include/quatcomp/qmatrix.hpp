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

#include <array>
#include <cstddef>

#include <Eigen/Dense>

#include "quatcomp/quaternion.hpp"

namespace quatcomp {

using Index = Eigen::Index;

/// Dense quaternion matrix A = A0 + A1*i + A2*j + A3*k stored as four real
/// M x N planes.
///
/// The Cayley-Dickson split used by the complex adjoint is
/// A = Ap + Aq*j with Ap = A0 + A1*i and Aq = A2 + A3*i.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(Index rows, Index cols);
  QMatrix(Eigen::MatrixXd a0, Eigen::MatrixXd a1, Eigen::MatrixXd a2, Eigen::MatrixXd a3);

  static QMatrix zeros(Index rows, Index cols) { return QMatrix(rows, cols); }
  static QMatrix identity(Index n);
  /// Builds Ap + Aq*j from its two complex parts.
  static QMatrix from_cayley_dickson(const Eigen::MatrixXcd& ap, const Eigen::MatrixXcd& aq);

  Index rows() const { return planes_[0].rows(); }
  Index cols() const { return planes_[0].cols(); }
  Index size() const { return rows() * cols(); }
  bool empty() const { return size() == 0; }

  const Eigen::MatrixXd& plane(std::size_t p) const { return planes_[p]; }
  Eigen::MatrixXd& plane(std::size_t p) { return planes_[p]; }

  Quaternion operator()(Index i, Index j) const {
    return {planes_[0](i, j), planes_[1](i, j), planes_[2](i, j), planes_[3](i, j)};
  }
  void set(Index i, Index j, const Quaternion& q);

  bool is_pure() const { return planes_[0].isZero(0.0); }

  double squared_norm() const;
  double frobenius_norm() const;

  Eigen::MatrixXcd complex_part() const;   // Ap
  Eigen::MatrixXcd jmultiple_part() const; // Aq

  QMatrix block(Index i, Index j, Index rows, Index cols) const;
  QMatrix transpose() const;

  QMatrix& operator+=(const QMatrix& o);
  QMatrix& operator-=(const QMatrix& o);
  QMatrix& operator*=(double s);

  friend bool operator==(const QMatrix& a, const QMatrix& b);

 private:
  std::array<Eigen::MatrixXd, 4> planes_;
};

QMatrix operator+(QMatrix a, const QMatrix& b);
QMatrix operator-(QMatrix a, const QMatrix& b);
QMatrix operator*(QMatrix a, double s);
QMatrix operator*(double s, QMatrix a);

/// Matrix product over the quaternion ring; entry (i,j) is
/// sum_k A(i,k)*B(k,j) with each product taken left to right.
QMatrix mat_mul(const QMatrix& a, const QMatrix& b);
inline QMatrix operator*(const QMatrix& a, const QMatrix& b) { return mat_mul(a, b); }

QMatrix conj_transpose(const QMatrix& a);

/// Re(tr(A^H B)). Symmetric in its arguments; real_trace_inner(A, A) is the
/// squared Frobenius norm.
double real_trace_inner(const QMatrix& a, const QMatrix& b);

/// Full quaternion trace of a square matrix.
Quaternion trace(const QMatrix& a);

/// diag(d) * A.
QMatrix scale_rows(const Eigen::VectorXd& d, const QMatrix& a);
/// A * diag(d).
QMatrix scale_cols(const QMatrix& a, const Eigen::VectorXd& d);

/// Complex adjoint [Ap, Aq; -conj(Aq), conj(Ap)] of size 2M x 2N.
Eigen::MatrixXcd embed(const QMatrix& a);

/// Inverse of embed. Throws StructureError when the two diagonal blocks are
/// not conjugates of each other or the off-diagonal blocks are not negated
/// conjugates, beyond `tol` in max-abs.
QMatrix extract(const Eigen::MatrixXcd& c, double tol = 1e-10);

}  // namespace quatcomp
