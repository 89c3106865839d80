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

#include "quatcomp/qsvd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "complex_svd.hpp"
#include "quatcomp/errors.hpp"

namespace quatcomp {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Quaternion singular values closer than this (relative to sigma_max) are
// treated as one cluster when pairing complex singular vectors.
constexpr double kClusterRelTol = 1e-6;

// Symplectic partner of the adjoint column [a; b]: [-conj(b); conj(a)].
// Both columns of the adjoint of a quaternion vector are related this way.
VectorXcd partner(const VectorXcd& x) {
  const Index h = x.size() / 2;
  VectorXcd out(x.size());
  out.head(h) = -x.tail(h).conjugate();
  out.tail(h) = x.head(h).conjugate();
  return out;
}

// Residual pool for pivoted symplectic Gram-Schmidt. Each candidate carries a
// primary vector and, optionally, a coupled vector that receives the same
// linear combination.
struct Pool {
  std::vector<VectorXcd> primary;
  std::vector<VectorXcd> coupled;
  std::vector<bool> used;
};

struct Basis {
  std::vector<VectorXcd> primary;
  std::vector<VectorXcd> coupled;
};

// Removes the components along each basis vector and its partner.
void project_out(VectorXcd& x, const std::vector<VectorXcd>& basis) {
  for (const VectorXcd& b : basis) {
    const VectorXcd jb = partner(b);
    x -= b.dot(x) * b + jb.dot(x) * jb;
  }
}

// Picks `count` quaternion vectors out of the pool. After each pick the
// remaining candidates are orthogonalized against the pick and its partner.
Basis symplectic_orthonormalize(Pool pool, Index count, bool with_coupled) {
  Basis out;
  const std::size_t n = pool.primary.size();
  pool.used.assign(n, false);
  for (Index t = 0; t < count; ++t) {
    // Candidates are taken in singular-value order; the largest remainder is
    // only used when every candidate has mostly been absorbed already.
    std::size_t best = n;
    double best_norm = -1.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (pool.used[c]) continue;
      const double nrm = pool.primary[c].norm();
      if (nrm >= 0.5) {
        best = c;
        best_norm = nrm;
        break;
      }
      if (nrm > best_norm) {
        best_norm = nrm;
        best = c;
      }
    }
    if (best == n || !(best_norm > 1e-3)) {
      throw DecompositionError("qsvd: could not complete a symplectic basis from the complex factors");
    }
    pool.used[best] = true;

    // One reorthogonalization pass against what was already taken.
    VectorXcd q = pool.primary[best];
    project_out(q, out.primary);
    q /= q.norm();
    VectorXcd qc;
    if (with_coupled) {
      qc = pool.coupled[best];
      project_out(qc, out.coupled);
      qc /= qc.norm();
    }

    const VectorXcd jq = partner(q);
    const VectorXcd jqc = with_coupled ? partner(qc) : VectorXcd();
    for (std::size_t c = 0; c < n; ++c) {
      if (pool.used[c]) continue;
      const auto alpha = q.dot(pool.primary[c]);
      const auto beta = jq.dot(pool.primary[c]);
      pool.primary[c] -= alpha * q + beta * jq;
      if (with_coupled) pool.coupled[c] -= alpha * qc + beta * jqc;
    }
    out.primary.push_back(std::move(q));
    if (with_coupled) out.coupled.push_back(std::move(qc));
  }
  return out;
}

// Columns of `pool` minus their components in the span of `basis` and its
// partners. Two passes.
MatrixXcd clear_span(MatrixXcd pool, const std::vector<VectorXcd>& basis) {
  if (basis.empty()) return pool;
  MatrixXcd b(pool.rows(), 2 * static_cast<Index>(basis.size()));
  for (std::size_t s = 0; s < basis.size(); ++s) {
    b.col(2 * static_cast<Index>(s)) = basis[s];
    b.col(2 * static_cast<Index>(s) + 1) = partner(basis[s]);
  }
  for (int pass = 0; pass < 2; ++pass) pool -= b * (b.adjoint() * pool);
  return pool;
}

// Completes `stored` to a full symplectic basis from the complex columns in
// `tail`.
void complete_basis(std::vector<VectorXcd>& stored, const MatrixXcd& tail, Index count) {
  const MatrixXcd cleared = clear_span(tail, stored);
  Pool pool;
  for (Index c = 0; c < cleared.cols(); ++c) pool.primary.emplace_back(cleared.col(c));
  Basis extra = symplectic_orthonormalize(std::move(pool), count, false);
  for (auto& x : extra.primary) stored.push_back(std::move(x));
}

// Column [a; b] of a complex adjoint, read back as the quaternion vector
// a - conj(b) * j.
void store_column(QMatrix& dst, Index col, const VectorXcd& x) {
  const Index h = x.size() / 2;
  for (Index i = 0; i < h; ++i) {
    const auto a = x(i);
    const auto b = x(h + i);
    dst.set(i, col, {a.real(), a.imag(), -b.real(), b.imag()});
  }
}

double unitarity_defect(const QMatrix& u) {
  QMatrix g = mat_mul(conj_transpose(u), u);
  g.plane(0).diagonal().array() -= 1.0;
  return g.frobenius_norm();
}

QMatrix reconstruct(const QsvdFactors& f) {
  const Index k = f.sigma.size();
  const QMatrix us = scale_cols(f.u.block(0, 0, f.u.rows(), k), f.sigma);
  return mat_mul(us, conj_transpose(f.v.block(0, 0, f.v.rows(), k)));
}

}  // namespace

Index QsvdFactors::rank() const {
  if (sigma.size() == 0) return 0;
  const double smax = sigma(0);
  if (!(smax > 0.0)) return 0;
  const double tol = 1e-9 * smax * static_cast<double>(std::max(u.rows(), v.rows()));
  return static_cast<Index>((sigma.array() > tol).count());
}

QsvdFactors qsvd(const QMatrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m < 1 || n < 1) throw PreconditionError("qsvd: matrix must be at least 1x1");
  const Index k = std::min(m, n);

  const detail::ComplexSvd cs = detail::complex_svd(embed(a));

  QsvdFactors f;
  f.sigma.resize(k);
  for (Index i = 0; i < k; ++i) f.sigma(i) = std::max(0.0, 0.5 * (cs.s(2 * i) + cs.s(2 * i + 1)));

  const double smax = f.sigma(0);
  // Singular values below this are rounding noise; their complex vectors do
  // not come in clean pairs, so they are completed like the null space.
  const double null_tol =
      smax * std::max(1e-12, 8.0 * static_cast<double>(std::max(m, n)) *
                                 std::numeric_limits<double>::epsilon());
  Index coupled_count = 0;
  while (coupled_count < k && f.sigma(coupled_count) > null_tol) ++coupled_count;

  // Singular directions with nonzero sigma: U and V are built together.
  Basis uv;
  Index i0 = 0;
  while (i0 < coupled_count) {
    Index i1 = i0;
    while (i1 + 1 < coupled_count && f.sigma(i1) - f.sigma(i1 + 1) <= kClusterRelTol * smax) ++i1;
    Pool pool;
    for (Index c = 2 * i0; c <= 2 * i1 + 1; ++c) {
      pool.primary.emplace_back(cs.u.col(c));
      pool.coupled.emplace_back(cs.v.col(c));
    }
    Basis basis = symplectic_orthonormalize(std::move(pool), i1 - i0 + 1, true);
    for (std::size_t t = 0; t < basis.primary.size(); ++t) {
      uv.primary.push_back(std::move(basis.primary[t]));
      uv.coupled.push_back(std::move(basis.coupled[t]));
    }
    i0 = i1 + 1;
  }

  // Null directions: left and right completions are independent.
  std::vector<VectorXcd> left = std::move(uv.primary);
  std::vector<VectorXcd> right = std::move(uv.coupled);
  if (coupled_count < m) {
    complete_basis(left, cs.u.rightCols(2 * (m - coupled_count)), m - coupled_count);
  }
  if (coupled_count < n) {
    complete_basis(right, cs.v.rightCols(2 * (n - coupled_count)), n - coupled_count);
  }

  f.u = QMatrix(m, m);
  f.v = QMatrix(n, n);
  for (Index t = 0; t < m; ++t) store_column(f.u, t, left[static_cast<std::size_t>(t)]);
  for (Index t = 0; t < n; ++t) store_column(f.v, t, right[static_cast<std::size_t>(t)]);

  const double a_norm = a.frobenius_norm();
  const double recon = (a - reconstruct(f)).frobenius_norm();
  const double u_defect = unitarity_defect(f.u);
  const double v_defect = unitarity_defect(f.v);
  if (!(recon <= 1e-9 * std::max(1.0, a_norm)) || !(u_defect <= 1e-9 * static_cast<double>(m)) ||
      !(v_defect <= 1e-9 * static_cast<double>(n))) {
    std::ostringstream os;
    os << "qsvd: verification failed for " << m << 'x' << n << " input (reconstruction residual "
       << recon << ", ||U^H U - I|| " << u_defect << ", ||V^H V - I|| " << v_defect
       << ", ||A|| " << a_norm << ')';
    throw DecompositionError(os.str());
  }
  return f;
}

QsvtResult qsvt_with_spectrum(const QMatrix& t, double tau) {
  if (!(tau >= 0.0)) throw PreconditionError("qsvt: threshold must be nonnegative");
  const QsvdFactors f = qsvd(t);
  QsvtResult out;
  out.shrunk_sigma = (f.sigma.array() - tau).max(0.0).matrix();
  Index keep = 0;
  while (keep < out.shrunk_sigma.size() && out.shrunk_sigma(keep) > 0.0) ++keep;
  if (keep == 0) {
    out.value = QMatrix(t.rows(), t.cols());
    return out;
  }
  const QMatrix us = scale_cols(f.u.block(0, 0, t.rows(), keep), out.shrunk_sigma.head(keep));
  out.value = mat_mul(us, conj_transpose(f.v.block(0, 0, t.cols(), keep)));
  return out;
}

QMatrix qsvt(const QMatrix& t, double tau) { return qsvt_with_spectrum(t, tau).value; }

TruncatedFactors truncated_factors(const QsvdFactors& f, Index r) {
  const Index m = f.u.rows();
  const Index n = f.v.rows();
  const Index k = std::min(m, n);
  if (r < 1 || r > k) {
    throw PreconditionError("truncated_factors: r = " + std::to_string(r) + " outside [1, " +
                            std::to_string(k) + "]");
  }
  TruncatedFactors tf;
  tf.r = r;
  tf.sigma = f.sigma;
  tf.a = conj_transpose(f.u.block(0, 0, m, k));
  tf.b = conj_transpose(f.v.block(0, 0, n, k));
  tf.c = tf.a.block(0, 0, r, m);
  tf.d = tf.b.block(0, 0, r, n);
  return tf;
}

TruncatedFactors truncated_factors(const QMatrix& x, Index r) {
  const Index k = std::min(x.rows(), x.cols());
  if (r < 1 || r > k) {
    throw PreconditionError("truncated_factors: r = " + std::to_string(r) + " outside [1, " +
                            std::to_string(k) + "]");
  }
  return truncated_factors(qsvd(x), r);
}

double trace_functional(const QMatrix& a, const QMatrix& x, const QMatrix& b, double ortho_tol) {
  if (a.cols() != x.rows() || b.cols() != x.cols() || a.rows() != b.rows()) {
    throw DimensionError("trace_functional: expected A (r x M), X (M x N), B (r x N)");
  }
  const auto defect = [](const QMatrix& q) {
    QMatrix g = mat_mul(q, conj_transpose(q));
    g.plane(0).diagonal().array() -= 1.0;
    return g.frobenius_norm();
  };
  const double da = defect(a);
  const double db = defect(b);
  if (!(da <= ortho_tol) || !(db <= ortho_tol)) {
    std::ostringstream os;
    os << "trace_functional: rows are not orthonormal (||AA^H - I|| = " << da
       << ", ||BB^H - I|| = " << db << ')';
    throw PreconditionError(os.str());
  }
  return trace(mat_mul(mat_mul(a, x), conj_transpose(b))).norm();
}

double real_trace_functional(const QMatrix& a, const QMatrix& x, const QMatrix& b) {
  return trace(mat_mul(mat_mul(a, x), conj_transpose(b))).w;
}

double nuclear_norm(const QMatrix& a) { return qsvd(a).sigma.sum(); }

double truncated_nuclear_norm(const Eigen::VectorXd& sigma, Index r) {
  if (r < 0 || r > sigma.size()) {
    throw PreconditionError("truncated_nuclear_norm: r = " + std::to_string(r) + " outside [0, " +
                            std::to_string(sigma.size()) + "]");
  }
  return sigma.tail(sigma.size() - r).sum();
}

double truncated_nuclear_norm(const QMatrix& a, Index r) {
  const Index k = std::min(a.rows(), a.cols());
  if (r < 0 || r > k) {
    throw PreconditionError("truncated_nuclear_norm: r = " + std::to_string(r) + " outside [0, " +
                            std::to_string(k) + "]");
  }
  return truncated_nuclear_norm(qsvd(a).sigma, r);
}

Index quaternion_rank(const QMatrix& a) { return qsvd(a).rank(); }

}  // namespace quatcomp
