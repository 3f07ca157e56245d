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
#include "qdfusion/fusion.hpp"

using namespace qdfusion;

namespace {

EmitterParams with_ratio(double r) { return from_lifetimes(125.5, 125.5 / r); }

FusionOutcome run(const EmitterParams &p, const TimeGrid &g, Scheme s,
                  Wandering w = {}, PairImperfections imp = {},
                  bool fss_on = true) {
  FusionConfig c;
  c.scheme = s;
  c.wandering = w;
  c.fss_on = fss_on;
  const PairState pair = pair_state(p, g);
  return fuse(pair, pair, c, imp);
}

bool valid_density(const PolarizationState &s) {
  const Eigen::MatrixXcd &m = s.matrix();
  if ((m - m.adjoint()).norm() > 1e-10) return false;
  if (std::abs(m.trace() - 1.0) > 1e-10) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues().minCoeff() > -1e-8;
}

const Scheme kSchemes[] = {Scheme::DoublePbs, Scheme::SinglePbsX,
                           Scheme::SinglePbsXX};

}  // namespace

TEST(Scheme, Names) {
  for (Scheme s : kSchemes) EXPECT_EQ(parse_scheme(scheme_name(s)), s);
  EXPECT_THROW(parse_scheme("triple"), Error);
}

TEST(Pbs, ModeTransform) {
  EXPECT_EQ(pbs_output(0, Pol::H), 0);
  EXPECT_EQ(pbs_output(1, Pol::H), 1);
  EXPECT_EQ(pbs_output(0, Pol::V), 1);
  EXPECT_EQ(pbs_output(1, Pol::V), 0);
  const Eigen::Matrix4cd u = pbs_mode_transform();
  EXPECT_LT((u.adjoint() * u - Eigen::Matrix4cd::Identity()).norm(), 1e-15);
  // Mode index 2 * port + pol: |H>_a -> |H>_c, |V>_a -> |V>_d.
  EXPECT_EQ(u(0, 0), Complex(1.0));
  EXPECT_EQ(u(3, 1), Complex(1.0));
  EXPECT_THROW(pbs_output(2, Pol::H), Error);
}

TEST(Hom, LimitCases) {
  const TimeGrid g{100.0, 32};
  auto pure = [&](double centre) {
    const TemporalAmplitude a = discretize(g, [&](double t1, double t2) {
      return Complex(std::exp(-std::pow(t1 - centre, 2) / 8) *
                     std::exp(-std::pow(t2 - 50, 2) / 8));
    });
    return reduced_density(a, Line::XX);
  };
  const HomResult same = hom_pbs(pure(30), pure(30));
  EXPECT_NEAR(same.visibility, 1.0, 1e-12);
  EXPECT_NEAR(same.p_cross, 0.0, 1e-12);
  EXPECT_NEAR(hom_pbs(pure(10), pure(90)).visibility, 0.0, 1e-12);
  const ReducedDensity half(g, pure(30).matrix() * 0.5);
  EXPECT_THROW(hom_pbs(half, pure(30)), Error);
}

TEST(Hom, CascadePhotonEqualsPurity) {
  const EmitterParams p = reference_emitter();
  const TemporalAmplitude a = discretize(p, TimeGrid::for_emitter(p));
  for (Line l : {Line::X, Line::XX}) {
    const ReducedDensity r = reduced_density(a, l);
    EXPECT_NEAR(hom_pbs(r, r).visibility, purity(r), 1e-12);
    EXPECT_NEAR(hom_pbs(r, r).visibility, 0.763, 1e-3);
  }
}

TEST(Hom, DephasingLowersVisibilityMonotonically) {
  const EmitterParams p = reference_emitter();
  const TemporalAmplitude a = discretize(p, TimeGrid::for_emitter(p, 12, 512));
  const ReducedDensity r = reduced_density(a, Line::X);
  double last = 2;
  for (double s : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double v = hom_pbs(dephase(r, s), dephase(r, s)).visibility;
    EXPECT_LT(v, last);
    last = v;
  }
}

TEST(Fuse, IdealDoubleIsUnityAcrossRatios) {
  for (double r : {1.0, 2.0, 3.22, 10.0}) {
    const EmitterParams p = with_ratio(r);
    const FusionOutcome o = run(p, TimeGrid::for_emitter(p), Scheme::DoublePbs);
    EXPECT_NEAR(o.coherence, 1.0, 1e-3) << r;
    EXPECT_NEAR(o.population, 1.0, 1e-12);
    EXPECT_NEAR(o.success_probability, 0.5, 1e-9);
  }
}

TEST(Fuse, IdealSingleEqualsPurityAcrossRatios) {
  for (double r : {1.0, 2.0, 3.22, 10.0}) {
    const EmitterParams p = with_ratio(r);
    const TimeGrid g = TimeGrid::for_emitter(p);
    const double lattice =
        oracle::lattice_purity(p.gamma_xx, p.gamma_x, g.dt());
    for (Scheme s : {Scheme::SinglePbsX, Scheme::SinglePbsXX}) {
      const FusionOutcome o = run(p, g, s);
      EXPECT_NEAR(o.coherence, indistinguishability_bound(p), 1e-3) << r;
      // Purity of the renormalized truncated state, sum l^4 / (sum l^2)^2,
      // moves by at most 2 r for residual r (equal rates hit the mode cap).
      EXPECT_NEAR(o.coherence, lattice, 2 * o.truncation_residual + 2e-6)
          << r;
      EXPECT_NEAR(o.success_probability, 0.5, 1e-9);
    }
  }
}

TEST(Fuse, MatchesBruteForceOnCoarseGrid) {
  EmitterParams p = reference_emitter();
  p.fss = 3.0;
  const TimeGrid g = TimeGrid::for_emitter(p, 10, 24);
  const Wandering ws[] = {Wandering::off(), Wandering::independent(1.5, 4.0),
                          Wandering::correlated(2.5)};
  const PairState pair = pair_state(p, g);
  for (Scheme s : kSchemes)
    for (const Wandering &w : ws) {
      FusionConfig full;
      full.scheme = s;
      full.wandering = w;
      full.schmidt_tolerance = 0;  // keep every mode on this small grid
      const FusionOutcome o = fuse(pair, pair, full);
      const oracle::BruteFusion b = oracle::brute_force_fusion(p, g, s, true, w);
      const double tol = w.active() ? 1e-3 : 1e-10;
      EXPECT_NEAR(o.coherence, b.coherence, tol)
          << scheme_name(s) << " " << wandering_name(w.mode);
      EXPECT_NEAR(std::abs(o.state(0, 15) - b.rho_hv), 0.0, tol);
      EXPECT_NEAR(o.success_probability, b.success, 1e-10);
      EXPECT_NEAR(o.population, 1.0, 1e-10);
      FusionConfig c;
      c.scheme = s;
      c.wandering = w;
      const FusionOutcome a = fuse_analytic(p, g, c);
      EXPECT_NEAR(a.coherence, b.coherence, 1e-9);
    }
}

TEST(Fuse, ValidStatesOverSweep) {
  for (double r : {1.0, 2.0, 3.22, 10.0})
    for (double s : {0.0, 0.5, 2.0}) {
      const EmitterParams p = with_ratio(r);
      const TimeGrid g = TimeGrid::for_emitter(p, 12, 384);
      for (Scheme sc : kSchemes) {
        const FusionOutcome o =
            run(p, g, sc, Wandering::independent(s, s));
        EXPECT_TRUE(valid_density(o.state)) << r << " " << s;
        EXPECT_GE(o.success_probability, 0.0);
        EXPECT_LE(o.success_probability, 1.0);
        EXPECT_GE(o.coherence, 0.0);
        EXPECT_LE(o.coherence, 1.0 + 1e-12);
      }
    }
}

TEST(Fuse, AgreesWithAnalyticAtReferenceRates) {
  EmitterParams p = reference_emitter();
  p.fss = 1.2;
  const TimeGrid g = TimeGrid::for_emitter(p);
  const PairState pair = pair_state(p, g);
  const PairImperfections imp{0.06, 0.0};
  const Wandering ws[] = {Wandering::off(), Wandering::independent(2.0, 5.5),
                          Wandering::correlated(3.0)};
  for (Scheme s : kSchemes)
    for (const Wandering &w : ws) {
      FusionConfig c;
      c.scheme = s;
      c.wandering = w;
      const FusionOutcome e = fuse(pair, pair, c, imp);
      const FusionOutcome a = fuse_analytic(p, g, c, imp);
      EXPECT_NEAR(e.coherence, a.coherence, 1e-3)
          << scheme_name(s) << " " << wandering_name(w.mode);
      EXPECT_NEAR(e.population, a.population, 1e-9);
      EXPECT_NEAR(e.success_probability, a.success_probability, 1e-9);
    }
}

TEST(Fuse, AnalyticLimits) {
  // With very wide wandering only terms whose compared photons share a
  // time bin survive; their weight vanishes as the bins shrink.
  const EmitterParams p = reference_emitter();
  FusionConfig c;
  c.wandering = Wandering::independent(1e4, 1e4);
  for (Scheme s : kSchemes) {
    c.scheme = s;
    const double coarse =
        fuse_analytic(p, TimeGrid::for_emitter(p, 12, 256), c).coherence;
    const double fine =
        fuse_analytic(p, TimeGrid::for_emitter(p, 12, 1024), c).coherence;
    EXPECT_LT(fine, 0.5 * coarse) << scheme_name(s);
    EXPECT_LT(fine, 0.05) << scheme_name(s);
  }
  const TimeGrid g = TimeGrid::for_emitter(p, 12, 512);
  c.wandering = Wandering::off();
  c.scheme = Scheme::DoublePbs;
  EXPECT_NEAR(fuse_analytic(with_ratio(10), g, c).coherence, 1.0, 1e-12);
  try {
    fuse_analytic(p, g, c, {0.0, 0.05});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::Unsupported);
  }
}

TEST(Fuse, DoubleFiltersHvAdmixture) {
  const EmitterParams p = reference_emitter();
  const TimeGrid g = TimeGrid::for_emitter(p, 12, 512);
  const PairImperfections imp{0.0, 0.05};
  const double d = run(p, g, Scheme::DoublePbs, {}, imp).population;
  const double sx = run(p, g, Scheme::SinglePbsX, {}, imp).population;
  const double sxx = run(p, g, Scheme::SinglePbsXX, {}, imp).population;
  EXPECT_GT(d, sx);
  EXPECT_GT(d, sxx);
  // First-order admixture is rejected; two HV pairs can still pass.
  EXPECT_GT(d, 1 - 0.05 * 0.05 * 2);
  EXPECT_LT(sx, 1 - 0.05 / 2);
}

TEST(Fuse, TruncationGuard) {
  const EmitterParams p = reference_emitter();
  const TimeGrid g = TimeGrid::for_emitter(p, 12, 512);
  FusionConfig c;
  c.schmidt_modes = 8;
  const PairState pair = pair_state(p, g);
  try {
    fuse(pair, pair, c);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::Truncation);
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(Fuse, ModeCapConvergence) {
  const EmitterParams p = reference_emitter();
  const TimeGrid g = TimeGrid::for_emitter(p);
  const PairState pair = pair_state(p, g);
  FusionConfig c;
  c.scheme = Scheme::SinglePbsX;
  c.schmidt_tolerance = 0;
  c.max_residual = 1;
  c.schmidt_modes = 128;
  const double a = fuse(pair, pair, c).coherence;
  c.schmidt_modes = 256;
  const double b = fuse(pair, pair, c).coherence;
  EXPECT_LT(std::fabs(a - b), 1e-4);
}

TEST(Fuse, WorkerCountDoesNotChangeResult) {
  const EmitterParams p = reference_emitter();
  const TimeGrid g = TimeGrid::for_emitter(p, 12, 512);
  const PairState pair = pair_state(p, g);
  FusionConfig c;
  c.wandering = Wandering::independent(2.0, 5.0);
  c.workers = 1;
  const FusionOutcome a = fuse(pair, pair, c);
  c.workers = 3;
  const FusionOutcome b = fuse(pair, pair, c);
  EXPECT_EQ((a.state.matrix() - b.state.matrix()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Fuse, PhaseOffsetIsReported) {
  const EmitterParams p = reference_emitter();
  const TimeGrid g = TimeGrid::for_emitter(p, 12, 256);
  FusionConfig c;
  c.phi_offset = 0.7;
  const PairState pair = pair_state(p, g);
  const FusionOutcome o = fuse(pair, pair, c);
  EXPECT_NEAR(o.phase, 0.7, 1e-9);
  EXPECT_NEAR(o.coherence, 1.0, 1e-9);
}

TEST(Fuse, PathOverlapScalesCoherence) {
  // One factor per photon that changes pair: four in the double network,
  // two in either single network.
  const EmitterParams p = reference_emitter();
  const TimeGrid g = TimeGrid::for_emitter(p, 12, 256);
  const PairState pair = pair_state(p, g);
  FusionConfig c;
  const double base_single = [&] {
    c.scheme = Scheme::SinglePbsX;
    return fuse(pair, pair, c).coherence;
  }();
  c.path_overlap = 0.9;
  c.scheme = Scheme::DoublePbs;
  EXPECT_NEAR(fuse(pair, pair, c).coherence, std::pow(0.9, 4), 1e-9);
  EXPECT_NEAR(fuse_analytic(p, g, c).coherence, std::pow(0.9, 4), 1e-9);
  c.scheme = Scheme::SinglePbsX;
  EXPECT_NEAR(fuse(pair, pair, c).coherence, 0.81 * base_single, 1e-9);
}

TEST(Fuse, ConfigValidation) {
  FusionConfig c;
  c.schmidt_modes = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.detuning_samples = 0;
  EXPECT_THROW(c.validate(), Error);
  Wandering w = Wandering::independent(-1, 1);
  EXPECT_THROW(w.validate(), Error);
  PairImperfections imp{0.7, 0.5};
  EXPECT_THROW(imp.validate(), Error);
}
