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

#include "qdfusion/polarization.hpp"

namespace qdfusion {

struct CoherenceScan {
  std::vector<double> thetas;
  std::vector<double> values;
  // Empty, or one standard deviation per point.
  std::vector<double> errors;
  void validate() const;
};

// theta_i = i pi / 9, i = 0..9.
std::vector<double> default_thetas();

// p(H^N) + p(V^N).
double population(const PolarizationState &s);
// Histogram over the 2^n H/V outcomes, indexed like the basis (qubit 0 is
// the most significant bit, V = 1).
double population(const std::vector<std::uint64_t> &counts, int n);

CoherenceScan coherence_scan(const PolarizationState &s,
                             const std::vector<double> &thetas = default_thetas());

struct CoherenceFit {
  double coherence = 0.0;
  double phase = 0.0;
  // Standard errors; set only when the scan carries point errors.
  double coherence_err = 0.0;
  double phase_err = 0.0;
  bool has_errors = false;
  bool degenerate = false;
};

// Least squares of values against C cos(N theta - phi), solved linearly as
// A cos(N theta) + B sin(N theta).
CoherenceFit coherence_fit(const CoherenceScan &scan, int n);

// (1/N) sum_i (-1)^i <M(theta_i)^{(x)N}> with theta_i = (i pi + phi)/N.
double coherence_eq3(const PolarizationState &s, int n, double phi);

double ghz_fidelity(double population, double coherence);

struct TomographyRecord {
  // Two-letter labels over {H, V, D, A, R, L}, e.g. "HV" or "DR".
  std::vector<std::string> settings;
  std::vector<std::int64_t> counts;
  void validate() const;
};

struct TomographyOptions {
  // Iterative likelihood refinement after the projection.
  bool maximum_likelihood = true;
  int max_iterations = 2000;
  double tolerance = 1e-13;
};

std::vector<std::string> standard_settings();
// All 36 pairs from {H, V, D, A, R, L}.
std::vector<std::string> overcomplete_settings();
// Projector |ab><ab| of a two-letter setting.
Eigen::Matrix4cd setting_projector(const std::string &label);

// Linear inversion, closest physical state, then optional likelihood
// refinement.
PolarizationState tomography_reconstruct(const TomographyRecord &record,
                                         const TomographyOptions &options = {});

// Fully entangled fraction from the singular values of the correlation
// matrix T_ij = <sigma_i (x) sigma_j>.
double max_entangled_fidelity(const PolarizationState &s);

}  // namespace qdfusion
