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

#include "qdfusion/multiplex.hpp"

using namespace qdfusion;

namespace {

struct Fixture {
  EmitterParams p = reference_emitter();
  TimeGrid g = TimeGrid::for_emitter(p, 12, 384);
  PairState pair = pair_state(p, g);

  PairSource source(const Wandering &w) {
    FusionConfig c;
    c.wandering = w;
    return make_pair_source(pair, c);
  }
};

}  // namespace

TEST(Schedule, TwoSwitchesPerPeriod) {
  LoopConfig c;
  c.n_photons = 6;
  c.period = 2.0;
  const SwitchSchedule s = schedule(c);
  EXPECT_EQ(s.periods, 3);
  ASSERT_EQ(s.windows.size(), 6u);
  for (const SwitchWindow &w : s.windows) {
    EXPECT_NEAR(w.end - w.start, 2.0, 1e-15);
    EXPECT_EQ(w.route, w.start == 0.0 ? 1 : 2);
  }
  EXPECT_NEAR(s.windows.back().end, 6.0, 1e-15);
}

TEST(Schedule, RejectsBadPhotonNumbers) {
  LoopConfig c;
  for (int n : {0, 3, 5, 8}) {
    c.n_photons = n;
    EXPECT_THROW(c.validate(), Error) << n;
  }
  c = {};
  c.loop_loss = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.period = -1;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Loop, FourPhotonsMatchDoublePbs) {
  Fixture f;
  for (const Wandering &w :
       {Wandering::off(), Wandering::independent(2.0, 5.0)}) {
    FusionConfig c;
    c.wandering = w;
    const PairSource s = make_pair_source(f.pair, c);
    const LoopResult l = simulate_loop({}, s, c);
    const FusionOutcome d = fuse(s, s, c);
    EXPECT_NEAR(l.coherence, d.coherence, 1e-12);
    EXPECT_NEAR(l.population, d.population, 1e-12);
    EXPECT_NEAR(l.success_probability, d.success_probability, 1e-12);
  }
}

TEST(Loop, IdealSuccessHalvesPerStep) {
  Fixture f;
  const PairSource s = f.source(Wandering::off());
  LoopConfig c;
  c.n_photons = 2;
  EXPECT_NEAR(simulate_loop(c, s).success_probability, 1.0, 1e-9);
  c.n_photons = 4;
  EXPECT_NEAR(simulate_loop(c, s).success_probability, 0.5, 1e-9);
  c.n_photons = 6;
  const LoopResult six = simulate_loop(c, s);
  EXPECT_NEAR(six.success_probability, 0.25, 1e-9);
  EXPECT_EQ(six.state.n_qubits(), 6);
  EXPECT_NEAR(six.coherence, 1.0, 1e-3);
  EXPECT_NEAR(six.population, 1.0, 1e-12);
}

TEST(Loop, LossFactorizes) {
  Fixture f;
  FusionConfig fc;
  fc.wandering = Wandering::independent(1.0, 3.0);
  const PairSource s = make_pair_source(f.pair, fc);
  LoopConfig c;
  c.n_photons = 6;
  const LoopResult a = simulate_loop(c, s, fc);
  c.loop_loss = 0.9;
  c.switch_loss = 0.95;
  const LoopResult b = simulate_loop(c, s, fc);
  EXPECT_LT(a.coherence, 0.99);
  EXPECT_NEAR(b.success_probability,
              a.success_probability * std::pow(0.9 * 0.95, 4), 1e-12);
  EXPECT_NEAR(b.coherence, a.coherence, 1e-12);
}

TEST(Loop, StorageOverlapScalesCoherence) {
  Fixture f;
  const PairSource s = f.source(Wandering::off());
  LoopConfig c;
  c.n_photons = 6;
  c.storage_overlap = 0.9;
  EXPECT_NEAR(simulate_loop(c, s).coherence, 0.81, 2e-3);
}

TEST(Loop, CoherenceFallsWithWanderingAndSize) {
  Fixture f;
  double last = 2;
  for (double sg : {0.0, 1.0, 2.0, 4.0}) {
    FusionConfig fc;
    fc.wandering = Wandering::independent(sg, sg);
    const PairSource s = make_pair_source(f.pair, fc);
    LoopConfig c;
    c.n_photons = 4;
    const double c4 = simulate_loop(c, s, fc).coherence;
    c.n_photons = 6;
    const double c6 = simulate_loop(c, s, fc).coherence;
    EXPECT_LT(c4, last) << sg;
    if (sg > 0) {
      EXPECT_LT(c6, c4) << sg;
    }
    last = c4;
  }
}
