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
#include <string>
#include <vector>

#include "qdfusion/cascade.hpp"
#include "qdfusion/fusion.hpp"
#include "qdfusion/metrics.hpp"
#include "qdfusion/polarization.hpp"

namespace qdfusion {

// Per-qubit projective measurement. Column 0 of each basis is the outcome-0
// ket (H, or the +1 eigenvector of M(theta)).
struct MeasurementSetting {
  std::string label;
  std::vector<Eigen::Matrix2cd> bases;

  int n_qubits() const { return static_cast<int>(bases.size()); }
  static MeasurementSetting hv(int n);
  static MeasurementSetting m_theta(int n, double theta);
  // One letter per qubit from {H, V, D, A, R, L}; outcome 0 is the named
  // state, outcome 1 its orthogonal partner.
  static MeasurementSetting labels(const std::string &letters);
};

struct MeasurementRecord {
  std::string setting;
  // 2^n counts indexed like the basis (qubit 0 most significant).
  std::vector<std::uint64_t> histogram;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  void validate() const;
};

// Shots are drawn in fixed blocks, each with its own derived stream, so the
// record does not depend on `workers`.
MeasurementRecord sample_outcomes(const PolarizationState &s,
                                  const MeasurementSetting &setting,
                                  std::uint64_t shots, std::uint64_t seed,
                                  int workers = 1);

std::vector<double> outcome_probabilities(const PolarizationState &s,
                                          const MeasurementSetting &setting);
// sum_o (-1)^{popcount o} n_o / shots.
double parity(const MeasurementRecord &r);

struct SourceModel {
  EmitterParams emitter;
  TimeGrid grid;
  PairImperfections imperfections;
  Wandering::Mode wandering_mode = Wandering::Mode::Independent;
  double pair_fidelity_target = 1.0;
  // Share of the pair infidelity assigned to FSS; the rest is white noise.
  double fss_share = 0.5;
  double multiphoton_prob = 0.0;
  double efficiency = 1.0;
  // Coincidence window (ps) and repetition rate (1/ns).
  double window = 600.0;
  double rep_rate = 0.08;
  void validate() const;

  // Reference lifetimes, default grid, no noise.
  static SourceModel reference();
  Wandering wandering() const;
  FusionConfig fusion_config(Scheme scheme) const;
};

struct HbtOptions {
  // Poissonian stand-in: photon number per pulse ~ Poisson(mean_photons).
  bool poissonian = false;
  double mean_photons = 0.1;
  int side_peaks = 5;
};

struct HbtResult {
  double g2_zero = 0.0;
  double std_error = 0.0;
  std::uint64_t center = 0;
  double side_mean = 0.0;
};

// Pulsed HBT: each pulse emits one photon plus a second with
// multiphoton_prob; photons are detected with `efficiency` behind a 50/50
// splitter. g2(0) is the zero-delay coincidence rate over the mean rate of
// the first `side_peaks` peaks on either side.
HbtResult simulate_hbt(const SourceModel &model, std::uint64_t shots,
                       std::uint64_t seed, const HbtOptions &opt = {});

// Closed form of the model above with threshold detectors:
// 2p / (1 + p (1 - eta/2))^2; the Poissonian stand-in gives 1.
double hbt_g2_expected(const SourceModel &model, const HbtOptions &opt = {});

// Two-photon excitation: sin^2((pi/2) (power/pi_power)^k).
double rabi_population(double power, double pi_power, double exponent = 1.0);

// Exact HOM visibilities of two photons of each line with the model's
// wandering applied.
struct HomVisibilities {
  double x;
  double xx;
};
HomVisibilities hom_visibilities(const SourceModel &model);

// Monte Carlo HOM: parallel/cross coincidence counts drawn from hom_pbs
// probabilities; visibility estimate (n_par - n_cross)/(n_par + n_cross).
struct HomEstimate {
  double visibility;
  double std_error;
  std::uint64_t parallel;
  std::uint64_t cross;
};
HomEstimate simulate_hom(const HomResult &exact, std::uint64_t shots,
                         std::uint64_t seed);

struct CalibrationTargets {
  double v_x = 0.625;
  double v_xx = 0.694;
  double pair_fidelity = 0.908;
};

struct CalibrationOptions {
  double fss_share = 0.5;
  Wandering::Mode wandering_mode = Wandering::Mode::Independent;
  double tolerance = 1e-6;
};

struct CalibrationResult {
  SourceModel model;
  HomVisibilities achieved;
  double pair_fidelity = 0.0;
  // Visibility ceiling of the cascade at these rates.
  double bound_x = 0.0;
  double bound_xx = 0.0;
};

CalibrationResult calibrate(const CalibrationTargets &targets,
                            const SourceModel &base = SourceModel::reference(),
                            const CalibrationOptions &options = {});

struct EndToEndOptions {
  std::vector<double> thetas = default_thetas();
  int bootstrap = 200;
  int workers = 1;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct EndToEndResult {
  Scheme scheme;
  FusionOutcome exact;
  Estimate population;
  Estimate coherence;
  Estimate fidelity;
  double phase = 0.0;
  CoherenceScan scan;
  std::uint64_t shots = 0;
};

// Fuses two pairs of the model, samples the H/V setting and the M(theta)
// scan with `shots` each, estimates population/coherence/fidelity and
// bootstraps their errors.
EndToEndResult end_to_end(const SourceModel &model, Scheme scheme,
                          std::uint64_t shots, std::uint64_t seed,
                          const EndToEndOptions &options = {});

// Same estimation on a precomputed fused state.
EndToEndResult estimate_from_state(const FusionOutcome &exact, Scheme scheme,
                                   std::uint64_t shots, std::uint64_t seed,
                                   const EndToEndOptions &options = {});

}  // namespace qdfusion
