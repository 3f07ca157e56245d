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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>

#include "qdfusion/error.hpp"

namespace qdfusion {

using Complex = std::complex<double>;

// Reduced Planck constant in ueV * ps.
inline constexpr double kHbar = 658.2119569;

enum class Line { XX = 0, X = 1 };
enum class Pol { H = 0, V = 1 };

// Rates are amplitude decay rates in 1/ps; energies in ueV; times in ps.
struct EmitterParams {
  double gamma_xx = 0.0;
  double gamma_x = 0.0;
  double fss = 0.0;
  double sigma_x = 0.0;
  double sigma_xx = 0.0;
  double pair_delay = 1500.0;
  static constexpr double hbar = kHbar;

  double ratio() const { return gamma_xx / gamma_x; }
  void validate() const;
};

EmitterParams from_lifetimes(double t1_x, double t1_xx);

// 125.5 ps (X) and 38.8 ps (XX) intensity lifetimes.
EmitterParams reference_emitter();

// Energy in ueV to angular frequency in rad/ps.
inline double ueV_to_omega(double e) { return e / kHbar; }

struct TimeGrid {
  double t_max = 0.0;
  int n_bins = 0;

  double dt() const { return t_max / n_bins; }
  // Bin midpoints.
  double time(int i) const { return (i + 0.5) * dt(); }
  void validate() const;

  // t_max = span / min(gamma_x, gamma_xx).
  static TimeGrid for_emitter(const EmitterParams &p, double span = 12.0,
                              int n_bins = 1536);
};

// Joint amplitude psi(t1, t2) sampled at bin midpoints. t1 indexes rows (XX
// photon), t2 indexes columns (X photon). Values carry continuum
// normalization: sum |psi|^2 dt^2 = 1.
class TemporalAmplitude {
 public:
  TemporalAmplitude(TimeGrid grid, Eigen::MatrixXcd values,
                    double truncated_mass = 0.0);

  const TimeGrid &grid() const { return grid_; }
  const Eigen::MatrixXcd &values() const { return values_; }
  double truncated_mass() const { return truncated_mass_; }
  bool truncation_warning() const { return truncated_mass_ > 1e-3; }
  bool is_real() const { return real_; }
  double norm() const;
  // Values scaled by dt so the squared entries sum to one.
  Eigen::MatrixXcd unit_matrix() const;

 private:
  TimeGrid grid_;
  Eigen::MatrixXcd values_;
  double truncated_mass_;
  bool real_;
};

Complex cascade_amplitude(const EmitterParams &p, double t1, double t2);
double joint_spectrum(const EmitterParams &p, double omega_xx, double omega_x);

// Probability mass of the continuous amplitude outside [0, t_max]^2.
double tail_mass(const EmitterParams &p, double t_max);

// Samples the cascade amplitude, renormalizes and records the lost mass.
TemporalAmplitude discretize(const EmitterParams &p, const TimeGrid &grid);
// Samples an arbitrary amplitude (used for product-state checks).
TemporalAmplitude discretize(const TimeGrid &grid,
                             const std::function<Complex(double, double)> &f);

// One-photon temporal density matrix on the grid, trace one.
class ReducedDensity {
 public:
  ReducedDensity(TimeGrid grid, Eigen::MatrixXcd matrix);
  const TimeGrid &grid() const { return grid_; }
  const Eigen::MatrixXcd &matrix() const { return matrix_; }
  double trace() const { return matrix_.trace().real(); }

 private:
  TimeGrid grid_;
  Eigen::MatrixXcd matrix_;
};

ReducedDensity reduced_density(const TemporalAmplitude &amp, Line photon);
double purity(const ReducedDensity &rho);
double indistinguishability_bound(const EmitterParams &p);

struct SchmidtDecomposition {
  TimeGrid grid;
  Eigen::VectorXd coefficients;
  // Columns are unit vectors on the grid (sum |u|^2 = 1).
  Eigen::MatrixXcd modes_xx;
  Eigen::MatrixXcd modes_x;
  // Weight discarded by the truncation, 1 - sum lambda^2.
  double residual = 0.0;
  double tolerance = 0.0;
  bool real = false;

  int size() const { return static_cast<int>(coefficients.size()); }
  bool converged() const { return residual <= tolerance; }
};

SchmidtDecomposition schmidt(const TemporalAmplitude &amp, int max_modes,
                             double tolerance, std::uint64_t seed = 7);

// Polarization-entangled pair (|HH> psi_H + |VV> psi_V)/sqrt2 with
// psi_V = psi_H exp(-i S (t2 - t1) / hbar).
class PairState {
 public:
  PairState(std::shared_ptr<const TemporalAmplitude> base, double fss);

  const TemporalAmplitude &base() const { return *base_; }
  std::shared_ptr<const TemporalAmplitude> base_ptr() const { return base_; }
  double fss() const { return fss_; }
  TemporalAmplitude amplitude(Pol pol) const;
  // <psi_V|psi_H>.
  Complex overlap_vh() const;

 private:
  std::shared_ptr<const TemporalAmplitude> base_;
  double fss_;
};

PairState pair_state(const EmitterParams &p, const TimeGrid &grid);

struct SpectrumGrid {
  Eigen::VectorXd omega_xx;
  Eigen::VectorXd omega_x;
  // density(i, j) at (omega_xx[i], omega_x[j]); integrates to one.
  Eigen::MatrixXd density;
};

// |FT psi|^2 from a 2-D FFT of the lattice, corrected by the transfer
// function of the causal lattice cells.
SpectrumGrid lattice_spectrum(const TemporalAmplitude &amp);
SpectrumGrid spectrum_on_axes(const EmitterParams &p,
                              const Eigen::VectorXd &omega_xx,
                              const Eigen::VectorXd &omega_x);

// Largest relative deviation of lattice_spectrum from joint_spectrum over
// the central half of both frequency axes.
double spectrum_error(const TemporalAmplitude &amp, const EmitterParams &p);

}  // namespace qdfusion
