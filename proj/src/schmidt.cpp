// Copyright 2026 The qdfusion Authors
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

#include <algorithm>
#include <random>

#include "qdfusion/cascade.hpp"

namespace qdfusion {

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct ThinSvd {
  Mat<Scalar> u;
  Eigen::VectorXd s;
  Mat<Scalar> v;
};

template <typename Scalar>
void orthonormalize(Mat<Scalar> &y) {
  Eigen::HouseholderQR<Mat<Scalar>> qr(y);
  y = qr.householderQ() * Mat<Scalar>::Identity(y.rows(), y.cols());
}

// Randomized range finder with power iterations (Halko, Martinsson, Tropp).
// Falls back to a dense SVD when the requested rank is a large fraction of
// the matrix.
template <typename Scalar>
ThinSvd<Scalar> leading_svd(const Mat<Scalar> &a, int rank,
                            std::uint64_t seed) {
  const int n = static_cast<int>(std::min(a.rows(), a.cols()));
  ThinSvd<Scalar> out;
  if (2 * rank >= n) {
    Eigen::BDCSVD<Mat<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.v = svd.matrixV();
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Mat<Scalar> omega(a.cols(), rank);
  for (Eigen::Index j = 0; j < omega.cols(); ++j)
    for (Eigen::Index i = 0; i < omega.rows(); ++i)
      omega(i, j) = Scalar(normal(rng));
  Mat<Scalar> y = a * omega;
  orthonormalize(y);
  for (int q = 0; q < 4; ++q) {
    Mat<Scalar> z = a.adjoint() * y;
    orthonormalize(z);
    y = a * z;
    orthonormalize(y);
  }
  Mat<Scalar> b = y.adjoint() * a;
  Eigen::BDCSVD<Mat<Scalar>> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = y * svd.matrixU();
  out.s = svd.singularValues();
  out.v = svd.matrixV();
  return out;
}

template <typename Scalar>
SchmidtDecomposition assemble(const ThinSvd<Scalar> &svd, int max_modes,
                              double tolerance) {
  const int avail = static_cast<int>(svd.s.size());
  int keep = 0;
  double kept = 0.0;
  while (keep < std::min(max_modes, avail)) {
    kept += svd.s[keep] * svd.s[keep];
    ++keep;
    if (1.0 - kept <= tolerance) break;
  }
  SchmidtDecomposition d;
  d.coefficients = svd.s.head(keep);
  d.modes_xx = svd.u.leftCols(keep).template cast<Complex>();
  // a = sum_k s_k u_k v_k^dagger, so the X-photon mode is conj(v_k).
  d.modes_x = svd.v.leftCols(keep).template cast<Complex>().conjugate();
  d.residual = std::max(0.0, 1.0 - kept);
  d.tolerance = tolerance;
  return d;
}

}  // namespace

SchmidtDecomposition schmidt(const TemporalAmplitude &amp, int max_modes,
                             double tolerance, std::uint64_t seed) {
  require(max_modes >= 1, ErrorCode::InvalidParameter,
          "schmidt needs at least one mode");
  require(tolerance >= 0, ErrorCode::InvalidParameter,
          "schmidt tolerance must be non-negative");
  const int n = amp.grid().n_bins;
  const int rank = std::min(n, max_modes + 16);
  const double dt = amp.grid().dt();
  if (amp.is_real()) {
    const Eigen::MatrixXd a = amp.values().real() * dt;
    SchmidtDecomposition d =
        assemble(leading_svd<double>(a, rank, seed), max_modes, tolerance);
    d.real = true;
    d.grid = amp.grid();
    return d;
  }
  const Eigen::MatrixXcd a = amp.unit_matrix();
  SchmidtDecomposition d =
      assemble(leading_svd<Complex>(a, rank, seed), max_modes, tolerance);
  d.grid = amp.grid();
  return d;
}

}  // namespace qdfusion
