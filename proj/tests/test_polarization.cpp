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


#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qdfusion/polarization.hpp"

using namespace qdfusion;

namespace {

constexpr double kPi = oracle::kPi;

Eigen::MatrixXcd ghz_outer(int n, double phi) {
  const int d = 1 << n;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  v(0) = 1 / std::sqrt(2.0);
  v(d - 1) = std::exp(Complex(0, phi)) / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST(Observable, MThetaLimits) {
  EXPECT_LT((m_theta(0).matrix - pauli_x().matrix).norm(), 1e-15);
  EXPECT_LT((m_theta(kPi / 2).matrix - pauli_y().matrix).norm(), 1e-15);
  for (double t : {0.1, 0.9, 2.5, -1.3}) {
    const Eigen::MatrixXcd m = m_theta(t).matrix;
    EXPECT_LT((m * m - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-14);
    EXPECT_LT((m - m.adjoint()).norm(), 1e-15);
  }
}

TEST(Observable, RejectsNonHermitian) {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1, 0, 0;
  EXPECT_THROW(Observable::from_matrix(m), Error);
}

TEST(Ghz, PureState) {
  const PolarizationState b = ghz_pure(2, 0);
  EXPECT_LT((b.matrix() - oracle::bell_phi_plus()).norm(), 1e-15);
  const PolarizationState s = ghz_pure(4, kPi);
  EXPECT_NEAR(s(0, 15).real(), -0.5, 1e-15);
  EXPECT_NEAR(s.purity(), 1.0, 1e-14);
  EXPECT_NEAR(s.matrix().trace().real(), 1.0, 1e-15);
  EXPECT_THROW(ghz_pure(1, 0), Error);
  EXPECT_THROW(ghz_pure(7, 0), Error);
}

TEST(Ghz, DecompositionIdentity) {
  for (int n = 2; n <= 5; ++n)
    for (double phi : {0.0, kPi / 7, kPi / 2, kPi, 1.2}) {
      const PolarizationState a = ghz_from_decomposition(n, phi);
      EXPECT_LT((a.matrix() - ghz_outer(n, phi)).cwiseAbs().maxCoeff(), 1e-12)
          << n << " " << phi;
      EXPECT_LT((a.matrix() - ghz_pure(n, phi).matrix()).cwiseAbs().maxCoeff(),
                1e-12);
    }
}

TEST(Expectation, GhzScanIsCosine) {
  for (int n : {2, 3, 4, 6})
    for (double phi : {0.0, 0.3, 2.0}) {
      const PolarizationState s = ghz_pure(n, phi);
      for (int i = 0; i < 13; ++i) {
        const double t = 0.37 * i;
        EXPECT_NEAR(expectation(s, tensor_power(m_theta(t), n)),
                    std::cos(n * t - phi), 1e-10);
      }
    }
}

TEST(Expectation, ParityAndMixed) {
  EXPECT_NEAR(expectation(ghz_pure(4, 0.8), tensor_power(pauli_z(), 4)), 1.0,
              1e-14);
  const PolarizationState m = maximally_mixed(3);
  EXPECT_NEAR(expectation(m, tensor_power(pauli_x(), 3)), 0.0, 1e-15);
  EXPECT_NEAR(expectation(m, {pauli_z(), m_theta(0.4), pauli_y()}), 0.0, 1e-15);
}

TEST(Expectation, DimensionMismatch) {
  EXPECT_THROW(expectation(ghz_pure(3, 0), tensor_power(pauli_x(), 2)), Error);
  EXPECT_THROW(expectation(ghz_pure(3, 0), {pauli_x(), pauli_x()}), Error);
}

TEST(State, InvariantChecks) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4) * 0.25;
  EXPECT_NO_THROW(PolarizationState::from_matrix(m));
  Eigen::MatrixXcd bad = m;
  bad(0, 1) = 0.1;
  EXPECT_THROW(PolarizationState::from_matrix(bad), Error);  // not Hermitian
  bad = m * 1.1;
  EXPECT_THROW(PolarizationState::from_matrix(bad), Error);  // trace
  bad = Eigen::MatrixXcd::Zero(4, 4);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;
  EXPECT_THROW(PolarizationState::from_matrix(bad), Error);  // negative
  EXPECT_THROW(PolarizationState::from_matrix(Eigen::MatrixXcd::Identity(3, 3) / 3),
               Error);
}

TEST(Fidelity, Basics) {
  const PolarizationState hh = product_state("HH"), vv = product_state("VV");
  EXPECT_NEAR(fidelity(hh, vv), 0.0, 1e-15);
  const PolarizationState g = ghz_pure(2, 0.4);
  EXPECT_NEAR(fidelity(g, g), 1.0, 1e-10);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 5; ++k) {
    const PolarizationState a =
        PolarizationState::from_matrix(oracle::random_density(rng));
    const PolarizationState b =
        PolarizationState::from_matrix(oracle::random_density(rng));
    const double f = fidelity(a, b);
    EXPECT_NEAR(f, fidelity(b, a), 1e-9);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
    // Pure argument: fidelity is the overlap.
    EXPECT_NEAR(fidelity(a, g), (g.matrix() * a.matrix()).trace().real(), 1e-9);
  }
}

TEST(PartialTrace, GhzMarginal) {
  const PolarizationState r = partial_trace(ghz_pure(4, 0.7), {2, 3});
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
  want(0, 0) = want(3, 3) = 0.5;
  EXPECT_LT((r.matrix() - want).norm(), 1e-14);
}

TEST(Tensor, ProductOfProducts) {
  const PolarizationState t = tensor(product_state("H"), product_state("V"));
  EXPECT_LT((t.matrix() - product_state("HV").matrix()).norm(), 1e-15);
}

TEST(Concurrence, BellAndProduct) {
  EXPECT_NEAR(concurrence(ghz_pure(2, 0.3)), 1.0, 1e-10);
  EXPECT_NEAR(concurrence(product_state("DR")), 0.0, 1e-10);
  // Werner: max(0, (3p - 1) / 2).
  EXPECT_NEAR(concurrence(PolarizationState::from_matrix(oracle::werner(0.6))),
              0.4, 1e-10);
}

TEST(Projection, ClipsNegativeEigenvalues) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  const Eigen::MatrixXcd p = project_to_physical(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-15);
  EXPECT_NEAR(p.trace().real(), 1.0, 1e-14);
  EXPECT_NO_THROW(clip_to_physical(m));
}
