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
#include "qdfusion/cascade.hpp"

using namespace qdfusion;

namespace {

EmitterParams with_ratio(double r) { return from_lifetimes(125.5, 125.5 / r); }

}  // namespace

TEST(Lifetimes, ReferenceRatio) {
  const EmitterParams p = from_lifetimes(125.5, 38.8);
  EXPECT_NEAR(p.ratio(), 125.5 / 38.8, 1e-12);
  EXPECT_NEAR(p.ratio(), 3.234, 1e-3);
}

TEST(Lifetimes, Substitution) {
  const EmitterParams p = from_lifetimes(100, 50);
  EXPECT_DOUBLE_EQ(p.gamma_x, 0.005);
  EXPECT_DOUBLE_EQ(p.gamma_xx, 0.01);
  EXPECT_DOUBLE_EQ(from_lifetimes(80, 80).ratio(), 1.0);
}

TEST(Lifetimes, RejectsNonPositive) {
  EXPECT_THROW(from_lifetimes(0, 10), Error);
  EXPECT_THROW(from_lifetimes(10, -1), Error);
  try {
    from_lifetimes(-1, 10);
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParameter);
  }
}

TEST(Emitter, ValidateRejectsNegativeWidths) {
  EmitterParams p = reference_emitter();
  p.sigma_x = -0.1;
  EXPECT_THROW(p.validate(), Error);
  p = reference_emitter();
  p.pair_delay = -1;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Amplitude, Substitution) {
  const EmitterParams p = reference_emitter();
  const double c = 2 * std::sqrt(p.gamma_xx * p.gamma_x);
  EXPECT_EQ(cascade_amplitude(p, 5.0, 4.0), Complex(0.0));
  EXPECT_EQ(cascade_amplitude(p, -1.0, 4.0), Complex(0.0));
  EXPECT_NEAR(std::abs(cascade_amplitude(p, 0, 0) - c), 0, 1e-15);
  const double t1 = 20, t2 = 70;
  EXPECT_NEAR(cascade_amplitude(p, t1, t2).real(),
              c * std::exp(-p.gamma_xx * t1 - p.gamma_x * (t2 - t1)), 1e-15);
}

namespace {

// Composite Simpson rule on [0, T] with n (even) panels.
template <typename F>
double simpson(F f, double T, int n) {
  const double h = T / n;
  double acc = f(0.0) + f(T);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return acc * h / 3;
}

}  // namespace

TEST(Amplitude, ContinuumNormalization) {
  // In (t1, tau = t2 - t1) the density factorizes into two exponentials.
  const EmitterParams p = reference_emitter();
  const double T = 40 / p.gamma_x;
  const double a = simpson(
      [&](double t) {
        return std::norm(cascade_amplitude(p, t, t)) /
               std::norm(cascade_amplitude(p, 0, 0));
      },
      T, 4000);
  const double b =
      simpson([&](double t) { return std::exp(-2 * p.gamma_x * t); }, T, 4000);
  const double integral = std::norm(cascade_amplitude(p, 0, 0)) * a * b;
  EXPECT_NEAR(integral, 1.0, 1e-6);
}

TEST(Amplitude, EqualRatesDiagonal) {
  const EmitterParams p = from_lifetimes(60, 60);
  for (double t : {0.0, 10.0, 55.0})
    EXPECT_NEAR(cascade_amplitude(p, t, t).real(),
                2 * p.gamma_x * std::exp(-p.gamma_x * t), 1e-15);
}

TEST(Spectrum, Substitution) {
  const EmitterParams p = reference_emitter();
  const double pi = oracle::kPi;
  EXPECT_NEAR(joint_spectrum(p, 0, 0),
              1 / (pi * pi * p.gamma_x * p.gamma_xx), 1e-9);
  EXPECT_LT(joint_spectrum(p, 0, 1e6), 1e-12);
}

TEST(Discretize, NormalizedAndCausal) {
  for (int bins : {16, 64, 300}) {
    const EmitterParams p = reference_emitter();
    const TemporalAmplitude a = discretize(p, TimeGrid::for_emitter(p, 12, bins));
    EXPECT_NEAR(a.norm(), 1.0, 1e-6) << bins;
    const auto &v = a.values();
    for (int i = 0; i < bins; ++i)
      for (int j = 0; j < i; ++j) ASSERT_EQ(v(i, j), Complex(0.0));
  }
}

TEST(Discretize, TailMassMatchesQuadrature) {
  const EmitterParams p = reference_emitter();
  // P(t2 > T) = 1 - int_0^T p1(t1) P(tau < T - t1) dt1.
  for (double span : {3.0, 6.0}) {
    const double T = span / p.gamma_x;
    const double inside = simpson(
        [&](double t1) {
          return 2 * p.gamma_xx * std::exp(-2 * p.gamma_xx * t1) *
                 (1 - std::exp(-2 * p.gamma_x * (T - t1)));
        },
        T, 20000);
    EXPECT_NEAR(tail_mass(p, T), 1 - inside, 1e-10) << span;
  }
  const TemporalAmplitude a = discretize(p, TimeGrid{3 / p.gamma_x, 64});
  EXPECT_GT(a.truncated_mass(), 1e-3);
  EXPECT_TRUE(a.truncation_warning());
  const TemporalAmplitude b = discretize(p, TimeGrid::for_emitter(p));
  EXPECT_LT(b.truncated_mass(), 1e-3);
  EXPECT_FALSE(b.truncation_warning());
}

TEST(Grid, Validation) {
  EXPECT_THROW(TimeGrid({10.0, 8}).validate(), Error);
  EXPECT_THROW(TimeGrid({-1.0, 64}).validate(), Error);
  const EmitterParams p = reference_emitter();
  const TimeGrid g = TimeGrid::for_emitter(p);
  EXPECT_NEAR(g.t_max, 12 / p.gamma_x, 1e-9);
  EXPECT_EQ(g.n_bins, 1536);
}

TEST(Purity, ProductAmplitudeIsPure) {
  const TimeGrid g{200.0, 64};
  const TemporalAmplitude a = discretize(g, [](double t1, double t2) {
    return Complex(std::exp(-t1 / 30), 0) * std::exp(-std::pow(t2 - 90, 2) / 400);
  });
  EXPECT_NEAR(purity(reduced_density(a, Line::XX)), 1.0, 1e-12);
  EXPECT_NEAR(purity(reduced_density(a, Line::X)), 1.0, 1e-12);
}

TEST(Purity, MatchesLatticeClosedForm) {
  for (int bins : {32, 200, 512}) {
    const EmitterParams p = reference_emitter();
    const TimeGrid g = TimeGrid::for_emitter(p, 12, bins);
    const TemporalAmplitude a = discretize(p, g);
    // Closed form holds for the infinite lattice; the cut at 12/gamma_x
    // leaves ~e^-24 of the mass.
    const double want = oracle::lattice_purity(p.gamma_xx, p.gamma_x, g.dt());
    EXPECT_NEAR(purity(reduced_density(a, Line::XX)), want, 1e-8) << bins;
    EXPECT_NEAR(purity(reduced_density(a, Line::X)), want, 1e-8) << bins;
  }
}

TEST(Purity, BoundAcrossRatios) {
  for (double r : {0.5, 1.0, 2.0, 3.22, 10.0}) {
    const EmitterParams p = with_ratio(r);
    const TemporalAmplitude a = discretize(p, TimeGrid::for_emitter(p));
    const double bound = indistinguishability_bound(p);
    EXPECT_NEAR(bound, r / (1 + r), 1e-12);
    const double pxx = purity(reduced_density(a, Line::XX));
    const double px = purity(reduced_density(a, Line::X));
    EXPECT_NEAR(pxx, bound, 1e-3) << r;
    EXPECT_NEAR(px, pxx, 1e-4) << r;
  }
}

TEST(Purity, ReferenceBound) {
  const EmitterParams p = reference_emitter();
  EXPECT_NEAR(indistinguishability_bound(p), 0.763, 1e-3);
  EmitterParams q = p;
  q.gamma_xx = 1e6 * q.gamma_x;
  EXPECT_NEAR(indistinguishability_bound(q), 1.0, 1e-5);
}

TEST(ReducedDensity, HermitianTraceOnePsd) {
  const EmitterParams p = reference_emitter();
  const TemporalAmplitude a = discretize(p, TimeGrid::for_emitter(p, 12, 256));
  for (Line l : {Line::XX, Line::X}) {
    const ReducedDensity r = reduced_density(a, l);
    EXPECT_NEAR(r.trace(), 1.0, 1e-6);
    EXPECT_LT((r.matrix() - r.matrix().adjoint()).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.matrix());
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(GridConvergence, DoublingFromDefaultChangesPurityLittle) {
  const EmitterParams p = reference_emitter();
  const TimeGrid g = TimeGrid::for_emitter(p);
  const double a = oracle::lattice_purity(p.gamma_xx, p.gamma_x, g.dt());
  const double b = oracle::lattice_purity(p.gamma_xx, p.gamma_x, g.dt() / 2);
  EXPECT_LT(std::fabs(a - b), 1e-4);
  const TemporalAmplitude amp = discretize(p, g);
  EXPECT_NEAR(purity(reduced_density(amp, Line::XX)), a, 1e-8);
}

TEST(Schmidt, ProductHasOneMode) {
  const TimeGrid g{200.0, 64};
  const TemporalAmplitude a = discretize(g, [](double t1, double t2) {
    return Complex(std::exp(-t1 / 30), 0) * std::exp(-t2 / 50);
  });
  const SchmidtDecomposition d = schmidt(a, 8, 1e-12);
  ASSERT_GE(d.size(), 1);
  EXPECT_NEAR(d.coefficients[0], 1.0, 1e-10);
  EXPECT_LT(d.residual, 1e-12);
}

TEST(Schmidt, MatchesFullSvd) {
  const EmitterParams p = reference_emitter();
  const TemporalAmplitude a = discretize(p, TimeGrid::for_emitter(p, 12, 160));
  const Eigen::MatrixXcd u = a.unit_matrix();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u);
  const SchmidtDecomposition d = schmidt(a, 40, 0.0);
  ASSERT_EQ(d.size(), 40);
  for (int k = 0; k < 40; ++k)
    EXPECT_NEAR(d.coefficients[k], svd.singularValues()[k], 1e-9) << k;
  double kept = 0;
  for (int k = 0; k < 40; ++k) kept += std::pow(svd.singularValues()[k], 2);
  EXPECT_NEAR(d.residual, 1 - kept, 1e-9);
}

TEST(Schmidt, InvariantsAtReferenceRates) {
  const EmitterParams p = reference_emitter();
  const TemporalAmplitude a = discretize(p, TimeGrid::for_emitter(p));
  const SchmidtDecomposition d = schmidt(a, 256, 1e-5);
  EXPECT_TRUE(d.converged());
  double s2 = 0, s4 = 0;
  for (int k = 0; k < d.size(); ++k) {
    EXPECT_GE(d.coefficients[k], 0.0);
    if (k) {
      EXPECT_LE(d.coefficients[k], d.coefficients[k - 1]);
    }
    s2 += std::pow(d.coefficients[k], 2);
    s4 += std::pow(d.coefficients[k], 4);
  }
  EXPECT_LE(s2, 1 + 1e-12);
  EXPECT_GE(s2, 1 - 1e-5);
  EXPECT_NEAR(s4, purity(reduced_density(a, Line::XX)), 1e-4);
  const Eigen::MatrixXcd gxx = d.modes_xx.adjoint() * d.modes_xx;
  const Eigen::MatrixXcd gx = d.modes_x.adjoint() * d.modes_x;
  const auto eye = Eigen::MatrixXcd::Identity(d.size(), d.size());
  EXPECT_LT((gxx - eye).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((gx - eye).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Schmidt, ResidualReportedWhenCapBinds) {
  const EmitterParams p = reference_emitter();
  const TemporalAmplitude a = discretize(p, TimeGrid::for_emitter(p, 12, 256));
  const SchmidtDecomposition d = schmidt(a, 4, 1e-9);
  EXPECT_EQ(d.size(), 4);
  EXPECT_FALSE(d.converged());
  EXPECT_GT(d.residual, 1e-3);
}

TEST(Spectrum, LatticeMatchesClosedForm) {
  const EmitterParams p = reference_emitter();
  const TemporalAmplitude a = discretize(p, TimeGrid::for_emitter(p));
  EXPECT_LT(spectrum_error(a, p), 0.01);
}

TEST(PairState, ZeroFssIsProduct) {
  const EmitterParams p = reference_emitter();
  const PairState s = pair_state(p, TimeGrid::for_emitter(p, 12, 128));
  EXPECT_NEAR(std::abs(s.overlap_vh() - 1.0), 0, 1e-12);
  const PolarizationState pol = pair_polarization_state(s);
  EXPECT_NEAR(concurrence(pol), 1.0, 1e-10);
  EXPECT_LT((s.amplitude(Pol::H).values() - s.amplitude(Pol::V).values())
                .norm(), 1e-12);
}

TEST(PairState, FssLowersConcurrence) {
  EmitterParams p = reference_emitter();
  p.fss = 4.0;
  const PairState s = pair_state(p, TimeGrid::for_emitter(p, 12, 512));
  const double c = concurrence(pair_polarization_state(s));
  EXPECT_LT(c, 1.0);
  // Oracle: |<psi_V|psi_H>| = |E[exp(i S tau / hbar)]| with tau ~ Exp(2 g_x).
  const double w = p.fss / kHbar, g = 2 * p.gamma_x;
  EXPECT_NEAR(c, g / std::hypot(g, w), 2e-3);
}
