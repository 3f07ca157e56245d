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

#include "qdfusion/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qdfusion {

void EmitterParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  require(finite(gamma_xx) && gamma_xx > 0, ErrorCode::InvalidParameter,
          "gamma_xx must be positive");
  require(finite(gamma_x) && gamma_x > 0, ErrorCode::InvalidParameter,
          "gamma_x must be positive");
  require(finite(fss), ErrorCode::InvalidParameter, "fss must be finite");
  require(finite(sigma_x) && sigma_x >= 0, ErrorCode::InvalidParameter,
          "sigma_x must be non-negative");
  require(finite(sigma_xx) && sigma_xx >= 0, ErrorCode::InvalidParameter,
          "sigma_xx must be non-negative");
  require(finite(pair_delay) && pair_delay >= 0, ErrorCode::InvalidParameter,
          "pair_delay must be non-negative");
}

EmitterParams from_lifetimes(double t1_x, double t1_xx) {
  require(std::isfinite(t1_x) && t1_x > 0, ErrorCode::InvalidParameter,
          "X lifetime must be positive");
  require(std::isfinite(t1_xx) && t1_xx > 0, ErrorCode::InvalidParameter,
          "XX lifetime must be positive");
  EmitterParams p;
  p.gamma_x = 1.0 / (2.0 * t1_x);
  p.gamma_xx = 1.0 / (2.0 * t1_xx);
  return p;
}

EmitterParams reference_emitter() { return from_lifetimes(125.5, 38.8); }

void TimeGrid::validate() const {
  require(std::isfinite(t_max) && t_max > 0, ErrorCode::InvalidParameter,
          "grid t_max must be positive");
  require(n_bins >= 16, ErrorCode::InvalidParameter,
          "grid needs at least 16 bins");
}

TimeGrid TimeGrid::for_emitter(const EmitterParams &p, double span,
                               int n_bins) {
  p.validate();
  TimeGrid g{span / std::min(p.gamma_x, p.gamma_xx), n_bins};
  g.validate();
  return g;
}

TemporalAmplitude::TemporalAmplitude(TimeGrid grid, Eigen::MatrixXcd values,
                                     double truncated_mass)
    : grid_(grid), values_(std::move(values)),
      truncated_mass_(truncated_mass) {
  require(values_.rows() == grid_.n_bins && values_.cols() == grid_.n_bins,
          ErrorCode::DimensionMismatch, "amplitude does not match its grid");
  real_ = values_.imag().cwiseAbs().maxCoeff() == 0.0;
}

double TemporalAmplitude::norm() const {
  const double dt = grid_.dt();
  return values_.squaredNorm() * dt * dt;
}

Eigen::MatrixXcd TemporalAmplitude::unit_matrix() const {
  return values_ * grid_.dt();
}

Complex cascade_amplitude(const EmitterParams &p, double t1, double t2) {
  if (t1 < 0 || t2 < t1) return 0.0;
  return 2.0 * std::sqrt(p.gamma_xx * p.gamma_x) *
         std::exp(-p.gamma_xx * t1 - p.gamma_x * (t2 - t1));
}

double joint_spectrum(const EmitterParams &p, double omega_xx,
                      double omega_x) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double s = omega_x + omega_xx;
  return p.gamma_xx * p.gamma_x /
         (pi2 * (omega_x * omega_x + p.gamma_x * p.gamma_x) *
          (s * s + p.gamma_xx * p.gamma_xx));
}

double tail_mass(const EmitterParams &p, double t_max) {
  // t2 = t1 + tau with t1 ~ Exp(2 gamma_xx), tau ~ Exp(2 gamma_x); the
  // square [0, T]^2 is left exactly when t2 > T.
  const double a = 2.0 * p.gamma_xx, b = 2.0 * p.gamma_x;
  if (std::abs(a - b) < 1e-12 * std::max(a, b))
    return std::exp(-a * t_max) * (1.0 + a * t_max);
  return (b * std::exp(-a * t_max) - a * std::exp(-b * t_max)) / (b - a);
}

namespace {

TemporalAmplitude normalized(const TimeGrid &grid, Eigen::MatrixXcd v,
                             double mass) {
  const double dt = grid.dt();
  const double norm = v.squaredNorm() * dt * dt;
  require(norm > 0 && std::isfinite(norm), ErrorCode::InvalidParameter,
          "amplitude has zero norm on the grid");
  v /= std::sqrt(norm);
  return TemporalAmplitude(grid, std::move(v), mass);
}

}  // namespace

TemporalAmplitude discretize(const EmitterParams &p, const TimeGrid &grid) {
  p.validate();
  grid.validate();
  const int n = grid.n_bins;
  const double c = 2.0 * std::sqrt(p.gamma_xx * p.gamma_x);
  Eigen::VectorXd e_xx(n), e_x(n);
  for (int i = 0; i < n; ++i) {
    e_xx[i] = std::exp(-(p.gamma_xx - p.gamma_x) * grid.time(i));
    e_x[i] = std::exp(-p.gamma_x * grid.time(i));
  }
  // exp(-g_xx t1 - g_x (t2 - t1)) = exp(-(g_xx - g_x) t1) exp(-g_x t2); the
  // factored form underflows only when g_xx < g_x and t1 is large, where
  // the direct product is used instead.
  const bool factored = p.gamma_xx >= p.gamma_x;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      v(i, j) = factored ? c * e_xx[i] * e_x[j]
                         : cascade_amplitude(p, grid.time(i), grid.time(j));
    }
  }
  return normalized(grid, std::move(v), tail_mass(p, grid.t_max));
}

TemporalAmplitude discretize(const TimeGrid &grid,
                             const std::function<Complex(double, double)> &f) {
  grid.validate();
  const int n = grid.n_bins;
  const double dt = grid.dt();
  Eigen::MatrixXcd v(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v(i, j) = f(grid.time(i), grid.time(j));
  const double raw = v.squaredNorm() * dt * dt;
  return normalized(grid, std::move(v), std::max(0.0, 1.0 - raw));
}

ReducedDensity::ReducedDensity(TimeGrid grid, Eigen::MatrixXcd matrix)
    : grid_(grid), matrix_(std::move(matrix)) {
  require(matrix_.rows() == grid_.n_bins && matrix_.cols() == grid_.n_bins,
          ErrorCode::DimensionMismatch,
          "density matrix does not match its grid");
}

ReducedDensity reduced_density(const TemporalAmplitude &amp, Line photon) {
  const double dt = amp.grid().dt();
  if (amp.is_real()) {
    const Eigen::MatrixXd a = amp.values().real() * dt;
    Eigen::MatrixXd r = photon == Line::XX
                            ? Eigen::MatrixXd(a * a.transpose())
                            : Eigen::MatrixXd(a.transpose() * a);
    return ReducedDensity(amp.grid(), r.cast<Complex>());
  }
  const Eigen::MatrixXcd a = amp.unit_matrix();
  Eigen::MatrixXcd r = photon == Line::XX
                           ? Eigen::MatrixXcd(a * a.adjoint())
                           : Eigen::MatrixXcd(a.transpose() * a.conjugate());
  return ReducedDensity(amp.grid(), std::move(r));
}

double purity(const ReducedDensity &rho) {
  return rho.matrix().squaredNorm();
}

double indistinguishability_bound(const EmitterParams &p) {
  p.validate();
  return p.gamma_xx / (p.gamma_xx + p.gamma_x);
}

PairState::PairState(std::shared_ptr<const TemporalAmplitude> base,
                     double fss)
    : base_(std::move(base)), fss_(fss) {
  require(base_ != nullptr, ErrorCode::InvalidParameter,
          "pair state needs an amplitude");
  require(std::isfinite(fss_), ErrorCode::InvalidParameter,
          "fss must be finite");
}

TemporalAmplitude PairState::amplitude(Pol pol) const {
  if (pol == Pol::H || fss_ == 0.0) return *base_;
  const TimeGrid &g = base_->grid();
  const double w = ueV_to_omega(fss_);
  const int n = g.n_bins;
  Eigen::MatrixXcd v = base_->values();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      v(i, j) *= std::polar(1.0, -w * (g.time(j) - g.time(i)));
  return TemporalAmplitude(g, std::move(v), base_->truncated_mass());
}

Complex PairState::overlap_vh() const {
  const TimeGrid &g = base_->grid();
  const double w = ueV_to_omega(fss_);
  const double dt = g.dt();
  const int n = g.n_bins;
  // Depends on t2 - t1 only, so accumulate |psi|^2 along diagonals.
  Eigen::VectorXd band = Eigen::VectorXd::Zero(2 * n - 1);
  const Eigen::MatrixXcd &v = base_->values();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) band[j - i + n - 1] += std::norm(v(i, j));
  Complex acc = 0.0;
  for (int k = 0; k < 2 * n - 1; ++k)
    if (band[k] != 0.0) acc += band[k] * std::polar(1.0, w * (k - n + 1) * dt);
  return acc * dt * dt;
}

PairState pair_state(const EmitterParams &p, const TimeGrid &grid) {
  return PairState(std::make_shared<TemporalAmplitude>(discretize(p, grid)),
                   p.fss);
}

}  // namespace qdfusion
