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

#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

/// A = U * diag(sigma) * V^H with unitary U (M x M), unitary V (N x N) and
/// sigma of length min(M, N), nonincreasing and nonnegative.
struct QsvdFactors {
  QMatrix u;
  Eigen::VectorXd sigma;
  QMatrix v;

  /// Number of singular values above 1e-9 * sigma_max * max(M, N).
  Index rank() const;
};

/// Factors used by the truncated-norm solvers, for k = min(M, N):
///   a = first k rows of U^H   (k x M; equals U^H when M <= N)
///   b = first k rows of V^H   (k x N)
///   c = first r rows of U^H   (r x M)
///   d = first r rows of V^H   (r x N)
/// so that a^H b is the polar factor of X and c^H d its rank-r leading part.
struct TruncatedFactors {
  QMatrix a;
  QMatrix b;
  QMatrix c;
  QMatrix d;
  Index r = 0;
  Eigen::VectorXd sigma;
};

/// Quaternion SVD computed from the SVD of the complex adjoint.
///
/// Singular values of the adjoint come in equal pairs. For each cluster of
/// (numerically) equal quaternion singular values the routine walks the
/// complex singular vectors in order, removes components along the vectors
/// already taken and their symplectic partners, and keeps the candidate with
/// the largest remainder; the matching right vector receives the same
/// combination. The result is verified against the reconstruction and
/// unitarity tolerances and a DecompositionError carrying the residuals is
/// thrown if it fails.
QsvdFactors qsvd(const QMatrix& a);

/// Soft-thresholds the singular values: U * diag(max(sigma - tau, 0)) * V^H.
/// This is the proximal map of tau * nuclear norm.
QMatrix qsvt(const QMatrix& t, double tau);

/// Same as qsvt but also returns the shrunk singular values.
struct QsvtResult {
  QMatrix value;
  Eigen::VectorXd shrunk_sigma;
};
QsvtResult qsvt_with_spectrum(const QMatrix& t, double tau);

TruncatedFactors truncated_factors(const QMatrix& x, Index r);
TruncatedFactors truncated_factors(const QsvdFactors& f, Index r);

/// |tr(A X B^H)| for row-orthonormal A (r x M) and B (r x N). Bounded above
/// by the sum of the r largest singular values of X, with equality at the
/// leading singular vectors. Throws PreconditionError when A A^H or B B^H
/// differ from the identity by more than `ortho_tol` in Frobenius norm.
double trace_functional(const QMatrix& a, const QMatrix& x, const QMatrix& b,
                        double ortho_tol = 1e-8);

/// Re(tr(A X B^H)); the form used inside the solvers. No orthonormality check.
double real_trace_functional(const QMatrix& a, const QMatrix& x, const QMatrix& b);

double nuclear_norm(const QMatrix& a);

/// Sum of the min(M, N) - r smallest singular values.
double truncated_nuclear_norm(const QMatrix& a, Index r);
double truncated_nuclear_norm(const Eigen::VectorXd& sigma, Index r);

Index quaternion_rank(const QMatrix& a);

}  // namespace quatcomp
