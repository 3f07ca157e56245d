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

#include "qdfusion/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdfusion {

void CoherenceScan::validate() const {
  require(values.size() == thetas.size(), ErrorCode::DimensionMismatch,
          "scan thetas and values differ in length");
  require(errors.empty() || errors.size() == thetas.size(),
          ErrorCode::DimensionMismatch, "scan errors differ in length");
  for (double e : errors)
    require(e > 0 && std::isfinite(e), ErrorCode::InvalidData,
            "scan errors must be positive");
}

std::vector<double> default_thetas() {
  std::vector<double> t(10);
  for (int i = 0; i < 10; ++i) t[i] = i * std::numbers::pi / 9.0;
  return t;
}

double population(const PolarizationState &s) {
  const int last = s.dim() - 1;
  return s(0, 0).real() + s(last, last).real();
}

double population(const std::vector<std::uint64_t> &counts, int n) {
  require(n >= 1 && n <= kMaxQubits, ErrorCode::InvalidParameter,
          "qubit count must be between 1 and 6");
  require(counts.size() == (std::size_t(1) << n), ErrorCode::DimensionMismatch,
          "histogram must have 2^n entries");
  double total = 0;
  for (auto c : counts) total += double(c);
  require(total > 0, ErrorCode::InvalidData, "empty counts");
  return (double(counts.front()) + double(counts.back())) / total;
}

CoherenceScan coherence_scan(const PolarizationState &s,
                             const std::vector<double> &thetas) {
  CoherenceScan scan;
  scan.thetas = thetas;
  const int n = s.n_qubits();
  for (double th : thetas) {
    const Observable m = m_theta(th);
    scan.values.push_back(
        expectation(s, std::vector<Observable>(std::size_t(n), m)));
  }
  return scan;
}

CoherenceFit coherence_fit(const CoherenceScan &scan, int n) {
  scan.validate();
  require(n >= 1, ErrorCode::InvalidParameter, "qubit count must be >= 1");
  const std::size_t k = scan.thetas.size();
  require(k >= 4, ErrorCode::InvalidData, "coherence fit needs >= 4 points");
  CoherenceFit fit;
  const auto [lo, hi] = std::minmax_element(scan.values.begin(),
                                            scan.values.end());
  if (*hi - *lo <= 1e-14 * std::max(1.0, std::abs(*hi))) {
    fit.degenerate = true;
    return fit;
  }
  const bool weighted = !scan.errors.empty();
  Eigen::MatrixXd x(k, 2);
  Eigen::VectorXd y(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double w = weighted ? 1.0 / scan.errors[i] : 1.0;
    x(i, 0) = w * std::cos(n * scan.thetas[i]);
    x(i, 1) = w * std::sin(n * scan.thetas[i]);
    y[i] = w * scan.values[i];
  }
  const Eigen::Matrix2d xtx = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(xtx);
  require(es.eigenvalues()[0] > 1e-9 * std::max(1.0, es.eigenvalues()[1]),
          ErrorCode::InvalidData,
          "scan angles do not resolve the cos/sin quadratures");
  const Eigen::Matrix2d cov = xtx.inverse();
  const Eigen::Vector2d ab = cov * (x.transpose() * y);
  const double a = ab[0], b = ab[1];
  fit.coherence = std::hypot(a, b);
  double phi = std::atan2(b, a);
  if (phi < 0) phi += 2 * std::numbers::pi;
  fit.phase = phi;
  if (weighted && fit.coherence > 0) {
    const double c2 = fit.coherence * fit.coherence;
    const double vc = (a * a * cov(0, 0) + b * b * cov(1, 1) +
                       2 * a * b * cov(0, 1)) / c2;
    const double vp = (b * b * cov(0, 0) + a * a * cov(1, 1) -
                       2 * a * b * cov(0, 1)) / (c2 * c2);
    fit.coherence_err = std::sqrt(std::max(0.0, vc));
    fit.phase_err = std::sqrt(std::max(0.0, vp));
    fit.has_errors = true;
  }
  return fit;
}

double coherence_eq3(const PolarizationState &s, int n, double phi) {
  require(n == s.n_qubits(), ErrorCode::DimensionMismatch,
          "coherence_eq3: n does not match the state");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const Observable m = m_theta((i * std::numbers::pi + phi) / n);
    const double e = expectation(s, std::vector<Observable>(std::size_t(n), m));
    acc += (i % 2 == 0 ? e : -e);
  }
  return acc / n;
}

double ghz_fidelity(double population, double coherence) {
  require(population >= 0 && population <= 1, ErrorCode::InvalidParameter,
          "population must lie in [0, 1]");
  require(coherence >= 0 && coherence <= 1, ErrorCode::InvalidParameter,
          "coherence must lie in [0, 1]");
  return 0.5 * (population + coherence);
}

double max_entangled_fidelity(const PolarizationState &s) {
  require(s.n_qubits() == 2, ErrorCode::DimensionMismatch,
          "max_entangled_fidelity needs a two-qubit state");
  const Observable paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t(i, j) = expectation(s, std::vector<Observable>{paulis[i], paulis[j]});
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(t);
  const Eigen::Vector3d sv = svd.singularValues();
  const double det = t.determinant();
  const double sign = det > 0 ? 1.0 : -1.0;
  return 0.25 * (1 + sv[0] + sv[1] - sign * sv[2]);
}

}  // namespace qdfusion
