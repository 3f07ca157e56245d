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

#include "qdfusion/multiplex.hpp"

#include <cmath>

namespace qdfusion {

void LoopConfig::validate() const {
  require(n_photons >= 2 && n_photons % 2 == 0, ErrorCode::InvalidParameter,
          "loop needs an even photon number >= 2");
  require(n_photons <= kMaxQubits, ErrorCode::InvalidParameter,
          "loop photon number is capped at 6");
  for (double t : {loop_loss, switch_loss, storage_overlap})
    require(t > 0 && t <= 1, ErrorCode::InvalidParameter,
            "loop transmissions must lie in (0, 1]");
  require(period > 0, ErrorCode::InvalidParameter, "period must be > 0");
}

SwitchSchedule schedule(const LoopConfig &config) {
  config.validate();
  SwitchSchedule s;
  s.periods = config.n_photons / 2;
  for (int k = 0; k < s.periods; ++k)
    for (int sw = 0; sw < 2; ++sw)
      s.windows.push_back({sw, k * config.period, (k + 1) * config.period,
                           k == 0 ? 1 : 2});
  return s;
}

InterferenceNetwork loop_network(int pairs) {
  require(pairs >= 1, ErrorCode::InvalidParameter, "loop needs a pair");
  InterferenceNetwork net;
  net.pairs = pairs;
  net.slots = pairs;
  // Pair 0 is stored first. An H photon leaves through c one step after
  // it was stored; a V photon entering from b leaves at once, a stored V
  // photon stays in the loop until the end.
  net.route = [pairs](int pair, Line, Pol pol) {
    if (pair == 0) return pol == Pol::H ? 0 : pairs - 1;
    return pol == Pol::V ? pair - 1 : pair;
  };
  return net;
}

LoopResult simulate_loop(const LoopConfig &config, const PairSource &source,
                         const FusionConfig &base) {
  config.validate();
  const int m = config.n_photons / 2;
  std::vector<const PairSource *> src(std::size_t(m), &source);
  NetworkResult r = run_network(loop_network(m), src, base);
  // Loss is a heralding factor: two photons make one round trip and pass
  // the switch per fusion step.
  const double t = config.loop_loss * config.switch_loss;
  const double loss = std::pow(t, 2 * (m - 1));
  const int last = static_cast<int>(r.rho.rows()) - 1;
  const double keep = std::pow(config.storage_overlap, m - 1);
  r.rho(0, last) *= keep;
  r.rho(last, 0) *= keep;
  const FusionOutcome o = outcome_from_network(r, base.phi_offset);
  LoopResult out{o.state};
  out.success_probability = o.success_probability * loss;
  out.population = o.population;
  out.coherence = o.coherence;
  out.phase = o.phase;
  return out;
}

LoopResult simulate_loop(const LoopConfig &config, const EmitterParams &emitter,
                         const Wandering &wandering, const FusionConfig &base) {
  config.validate();
  FusionConfig c = base;
  c.wandering = wandering;
  const PairState pair = pair_state(emitter, TimeGrid::for_emitter(emitter));
  const PairSource source = make_pair_source(pair, c);
  return simulate_loop(config, source, c);
}

}  // namespace qdfusion
