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

#include "complex_svd.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "quatcomp/errors.hpp"

namespace quatcomp::detail {
namespace {

lapack_complex_double* as_lapack(Eigen::MatrixXcd& m) {
  return reinterpret_cast<lapack_complex_double*>(m.data());
}

}  // namespace

ComplexSvd complex_svd(const Eigen::MatrixXcd& a) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);

  ComplexSvd out;
  out.s.resize(k);
  out.u.resize(m, m);
  Eigen::MatrixXcd vt(n, n);

  // zgesdd overwrites its input.
  Eigen::MatrixXcd work = a;
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, as_lapack(work), m, out.s.data(),
                                   as_lapack(out.u), m, as_lapack(vt), n);
  if (info > 0) {
    // Divide and conquer did not converge; retry with the QR-iteration driver.
    work = a;
    Eigen::VectorXd superb(std::max<lapack_int>(k - 1, 1));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'A', 'A', m, n, as_lapack(work), m, out.s.data(),
                          as_lapack(out.u), m, as_lapack(vt), n, superb.data());
  }
  if (info != 0) {
    throw DecompositionError("complex SVD backend failed with info = " + std::to_string(info));
  }
  out.v = vt.adjoint();
  return out;
}

}  // namespace quatcomp::detail
