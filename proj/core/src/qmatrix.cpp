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

#include "quatcomp/qmatrix.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "quatcomp/errors.hpp"

namespace quatcomp {
namespace {

std::string shape(const QMatrix& a) {
  std::ostringstream os;
  os << a.rows() << 'x' << a.cols();
  return os.str();
}

void require_same_shape(const QMatrix& a, const QMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

}  // namespace

QMatrix::QMatrix(Index rows, Index cols) {
  for (auto& p : planes_) p = Eigen::MatrixXd::Zero(rows, cols);
}

QMatrix::QMatrix(Eigen::MatrixXd a0, Eigen::MatrixXd a1, Eigen::MatrixXd a2, Eigen::MatrixXd a3)
    : planes_{std::move(a0), std::move(a1), std::move(a2), std::move(a3)} {
  for (std::size_t p = 1; p < 4; ++p) {
    if (planes_[p].rows() != planes_[0].rows() || planes_[p].cols() != planes_[0].cols()) {
      throw DimensionError("QMatrix: component planes differ in shape");
    }
  }
}

QMatrix QMatrix::identity(Index n) {
  QMatrix out(n, n);
  out.planes_[0].setIdentity();
  return out;
}

QMatrix QMatrix::from_cayley_dickson(const Eigen::MatrixXcd& ap, const Eigen::MatrixXcd& aq) {
  if (ap.rows() != aq.rows() || ap.cols() != aq.cols()) {
    throw DimensionError("from_cayley_dickson: parts differ in shape");
  }
  return QMatrix(ap.real(), ap.imag(), aq.real(), aq.imag());
}

void QMatrix::set(Index i, Index j, const Quaternion& q) {
  planes_[0](i, j) = q.w;
  planes_[1](i, j) = q.x;
  planes_[2](i, j) = q.y;
  planes_[3](i, j) = q.z;
}

double QMatrix::squared_norm() const {
  double s = 0.0;
  for (const auto& p : planes_) s += p.squaredNorm();
  return s;
}

double QMatrix::frobenius_norm() const { return std::sqrt(squared_norm()); }

Eigen::MatrixXcd QMatrix::complex_part() const {
  Eigen::MatrixXcd out(rows(), cols());
  out.real() = planes_[0];
  out.imag() = planes_[1];
  return out;
}

Eigen::MatrixXcd QMatrix::jmultiple_part() const {
  Eigen::MatrixXcd out(rows(), cols());
  out.real() = planes_[2];
  out.imag() = planes_[3];
  return out;
}

QMatrix QMatrix::block(Index i, Index j, Index r, Index c) const {
  return QMatrix(planes_[0].block(i, j, r, c), planes_[1].block(i, j, r, c),
                 planes_[2].block(i, j, r, c), planes_[3].block(i, j, r, c));
}

QMatrix QMatrix::transpose() const {
  return QMatrix(planes_[0].transpose(), planes_[1].transpose(), planes_[2].transpose(),
                 planes_[3].transpose());
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t p = 0; p < 4; ++p) planes_[p] += o.planes_[p];
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t p = 0; p < 4; ++p) planes_[p] -= o.planes_[p];
  return *this;
}

QMatrix& QMatrix::operator*=(double s) {
  for (auto& p : planes_) p *= s;
  return *this;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t p = 0; p < 4; ++p) {
    if (a.planes_[p] != b.planes_[p]) return false;
  }
  return true;
}

QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
QMatrix operator*(QMatrix a, double s) { return a *= s; }
QMatrix operator*(double s, QMatrix a) { return a *= s; }

QMatrix mat_mul(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: inner dimensions differ " + shape(a) + " * " + shape(b));
  }
  const auto& a0 = a.plane(0);
  const auto& a1 = a.plane(1);
  const auto& a2 = a.plane(2);
  const auto& a3 = a.plane(3);
  const auto& b0 = b.plane(0);
  const auto& b1 = b.plane(1);
  const auto& b2 = b.plane(2);
  const auto& b3 = b.plane(3);

  QMatrix c(a.rows(), b.cols());
  auto& c0 = c.plane(0);
  auto& c1 = c.plane(1);
  auto& c2 = c.plane(2);
  auto& c3 = c.plane(3);

  c0.noalias() = a0 * b0;
  c0.noalias() -= a1 * b1;
  c0.noalias() -= a2 * b2;
  c0.noalias() -= a3 * b3;

  c1.noalias() = a0 * b1;
  c1.noalias() += a1 * b0;
  c1.noalias() += a2 * b3;
  c1.noalias() -= a3 * b2;

  c2.noalias() = a0 * b2;
  c2.noalias() -= a1 * b3;
  c2.noalias() += a2 * b0;
  c2.noalias() += a3 * b1;

  c3.noalias() = a0 * b3;
  c3.noalias() += a1 * b2;
  c3.noalias() -= a2 * b1;
  c3.noalias() += a3 * b0;
  return c;
}

QMatrix conj_transpose(const QMatrix& a) {
  return QMatrix(a.plane(0).transpose(), -a.plane(1).transpose(), -a.plane(2).transpose(),
                 -a.plane(3).transpose());
}

double real_trace_inner(const QMatrix& a, const QMatrix& b) {
  require_same_shape(a, b, "real_trace_inner");
  double s = 0.0;
  for (std::size_t p = 0; p < 4; ++p) s += a.plane(p).cwiseProduct(b.plane(p)).sum();
  return s;
}

Quaternion trace(const QMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("trace: matrix is not square " + shape(a));
  return {a.plane(0).trace(), a.plane(1).trace(), a.plane(2).trace(), a.plane(3).trace()};
}

QMatrix scale_rows(const Eigen::VectorXd& d, const QMatrix& a) {
  if (d.size() != a.rows()) throw DimensionError("scale_rows: diagonal length differs from rows");
  QMatrix out = a;
  for (std::size_t p = 0; p < 4; ++p) out.plane(p) = d.asDiagonal() * a.plane(p);
  return out;
}

QMatrix scale_cols(const QMatrix& a, const Eigen::VectorXd& d) {
  if (d.size() != a.cols()) throw DimensionError("scale_cols: diagonal length differs from cols");
  QMatrix out = a;
  for (std::size_t p = 0; p < 4; ++p) out.plane(p) = a.plane(p) * d.asDiagonal();
  return out;
}

Eigen::MatrixXcd embed(const QMatrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  const Eigen::MatrixXcd ap = a.complex_part();
  const Eigen::MatrixXcd aq = a.jmultiple_part();
  Eigen::MatrixXcd c(2 * m, 2 * n);
  c.topLeftCorner(m, n) = ap;
  c.topRightCorner(m, n) = aq;
  c.bottomLeftCorner(m, n) = -aq.conjugate();
  c.bottomRightCorner(m, n) = ap.conjugate();
  return c;
}

QMatrix extract(const Eigen::MatrixXcd& c, double tol) {
  if (c.rows() % 2 != 0 || c.cols() % 2 != 0) {
    throw StructureError("extract: complex adjoint must have even dimensions");
  }
  const Index m = c.rows() / 2;
  const Index n = c.cols() / 2;
  const Eigen::MatrixXcd ap = c.topLeftCorner(m, n);
  const Eigen::MatrixXcd aq = c.topRightCorner(m, n);
  if (m > 0 && n > 0) {
    const double diag_gap = (c.bottomRightCorner(m, n) - ap.conjugate()).cwiseAbs().maxCoeff();
    const double off_gap = (c.bottomLeftCorner(m, n) + aq.conjugate()).cwiseAbs().maxCoeff();
    if (!(diag_gap <= tol) || !(off_gap <= tol)) {
      std::ostringstream os;
      os << "extract: block structure violated (diagonal gap " << diag_gap << ", off-diagonal gap "
         << off_gap << ", tolerance " << tol << ')';
      throw StructureError(os.str());
    }
  }
  return QMatrix::from_cayley_dickson(ap, aq);
}

}  // namespace quatcomp
