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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qdfusion/cascade.hpp"
#include "qdfusion/polarization.hpp"

namespace qdfusion {

enum class Scheme { SinglePbsX, SinglePbsXX, DoublePbs };

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);

struct Wandering {
  enum class Mode { Off, Independent, Correlated };
  Mode mode = Mode::Off;
  // Standard deviations in ueV. Correlated mode uses sigma_x for both lines.
  double sigma_x = 0.0;
  double sigma_xx = 0.0;

  static Wandering off() { return {}; }
  static Wandering independent(double sx, double sxx) {
    return {Mode::Independent, sx, sxx};
  }
  static Wandering correlated(double s) { return {Mode::Correlated, s, s}; }
  bool active() const {
    return mode != Mode::Off && (sigma_x > 0 || sigma_xx > 0);
  }
  double sigma(Line l) const { return l == Line::XX ? sigma_xx : sigma_x; }
  void validate() const;
};

std::string_view wandering_name(Wandering::Mode m);

// Deviations of a source pair from the ideal Bell pair. Depolarization p
// mixes in the four product states with weight p/4 each; hv_admixture h
// mixes in |HV> and |VH> with weight h/2 each.
struct PairImperfections {
  double depolarization = 0.0;
  double hv_admixture = 0.0;
  void validate() const;
};

struct FusionConfig {
  Scheme scheme = Scheme::DoublePbs;
  bool fss_on = true;
  Wandering wandering;
  // Mode cap and residual target of the Schmidt truncation.
  int schmidt_modes = 256;
  double schmidt_tolerance = 1e-5;
  // fuse refuses to run above this truncation residual.
  double max_residual = 1e-3;
  int detuning_samples = 200;
  std::uint64_t seed = 20240611;
  // Birefringent phase between |H...H> and |V...V>.
  double phi_offset = 0.0;
  // Spatial overlap amplitude for photons from different pairs in a slot.
  double path_overlap = 1.0;
  int workers = 1;
  void validate() const;
};

struct FusionOutcome {
  PolarizationState state;
  double success_probability = 0.0;
  double population = 0.0;
  double coherence = 0.0;
  double phase = 0.0;
  double truncation_residual = 0.0;
  int schmidt_modes_used = 0;
};

// Population, coherence 2|rho(H^N, V^N)| and phase arg rho(V^N, H^N).
struct GhzSummary {
  double population;
  double coherence;
  double phase;
};
GhzSummary ghz_summary(const PolarizationState &s);

struct HomResult {
  double visibility;
  // Coincidence probabilities in the D/D and D/A output projections,
  // conditioned on one photon per PBS output.
  double p_parallel;
  double p_cross;
  double success_probability;
};

// PBS-type HOM with both inputs in |D>.
HomResult hom_pbs(const ReducedDensity &a, const ReducedDensity &b);
// Average of a one-photon state over a Gaussian detuning with sd sigma
// (ueV): rho(t, t') exp(-sigma^2 (t - t')^2 / (2 hbar^2)).
ReducedDensity dephase(const ReducedDensity &rho, double sigma);

// Output port (0 = c, 1 = d) of a photon entering port 0 = a or 1 = b.
int pbs_output(int input, Pol pol);
// Unitary on (aH, aV, bH, bV) -> (cH, cV, dH, dV).
Eigen::Matrix4cd pbs_mode_transform();

// A pair is a mixture of pure polarization components; each component is a
// superposition of terms sharing one base temporal amplitude, each term
// carrying rigid detunings (rad/ps) on its two photons.
struct PairTerm {
  Complex coeff;
  Pol xx;
  Pol x;
  double detune_xx;
  double detune_x;
};

struct PairComponent {
  double weight;
  std::vector<PairTerm> terms;
};

struct PairSource {
  std::shared_ptr<const SchmidtDecomposition> schmidt;
  std::vector<PairComponent> components;
};

std::vector<PairComponent> pair_components(double fss, bool fss_on,
                                           const PairImperfections &imp);
PairSource make_pair_source(const PairState &pair, const FusionConfig &config,
                            const PairImperfections &imp = {});

// Two-qubit polarization state of one pair after tracing the time bins.
PolarizationState pair_polarization_state(const PairState &pair,
                                          const PairImperfections &imp = {});

// Routing network made of PBSs: every photon keeps its polarization and is
// sent to a detector slot of its own line.
struct InterferenceNetwork {
  int pairs = 0;
  int slots = 0;
  std::function<int(int pair, Line line, Pol pol)> route;
};

InterferenceNetwork fusion_network(Scheme s);

struct NetworkResult {
  // Unnormalized post-selected density matrix; qubit order is
  // [XX slot 0, X slot 0, XX slot 1, X slot 1, ...].
  Eigen::MatrixXcd rho;
  double residual = 0.0;
  int modes = 0;
};

NetworkResult run_network(const InterferenceNetwork &net,
                          const std::vector<const PairSource *> &sources,
                          const FusionConfig &config);

FusionOutcome outcome_from_network(const NetworkResult &r,
                                   double phi_offset);

FusionOutcome fuse(const PairSource &early, const PairSource &late,
                   const FusionConfig &config);
FusionOutcome fuse(const PairState &early, const PairState &late,
                   const FusionConfig &config,
                   const PairImperfections &imp = {});

// Closed-form overlaps averaged exactly over Gaussian wandering.
FusionOutcome fuse_analytic(const EmitterParams &params, const TimeGrid &grid,
                            const FusionConfig &config,
                            const PairImperfections &imp = {});

}  // namespace qdfusion
