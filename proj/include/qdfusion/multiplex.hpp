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

#pragma once

#include <vector>

#include "qdfusion/cascade.hpp"
#include "qdfusion/fusion.hpp"
#include "qdfusion/polarization.hpp"

namespace qdfusion {

struct LoopConfig {
  int n_photons = 4;
  // Transmissions per loop round trip and per switch pass.
  double loop_loss = 1.0;
  double switch_loss = 1.0;
  // Emission period in ns.
  double period = 1.5;
  // Temporal overlap amplitude kept by a photon per stored round trip.
  double storage_overlap = 1.0;
  void validate() const;
};

struct SwitchWindow {
  int switch_id;  // 0 or 1
  double start;   // ns
  double end;     // ns
  int route;      // 1 or 2
};

struct SwitchSchedule {
  std::vector<SwitchWindow> windows;
  int periods = 0;
};

// Period 0 routes the first pair into the loop (route 1); every later
// period routes the stored photons back onto the PBS (route 2).
SwitchSchedule schedule(const LoopConfig &config);

// Loop PBS network: at step j the stored photons enter port a and pair j
// enters port b; output c leaves to time slot j - 1 and output d is stored.
InterferenceNetwork loop_network(int pairs);

struct LoopResult {
  PolarizationState state;
  double success_probability = 0.0;
  double population = 0.0;
  double coherence = 0.0;
  double phase = 0.0;
};

LoopResult simulate_loop(const LoopConfig &config, const EmitterParams &emitter,
                         const Wandering &wandering,
                         const FusionConfig &base = {});
// Same with a precomputed decomposition of the emitter's pair.
LoopResult simulate_loop(const LoopConfig &config, const PairSource &source,
                         const FusionConfig &base = {});

}  // namespace qdfusion
