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

// Overlaps of the two fused pairs averaged exactly over Gaussian detunings.
// A detuning difference D between the pairs with variance 2 sigma^2 enters
// as E[exp(-i D tau)] = exp(-sigma^2 tau^2), so every average is a Toeplitz
// kernel contraction on the lattice.

#include <cmath>

#include "qdfusion/fusion.hpp"

namespace qdfusion {

namespace {

Eigen::MatrixXd toeplitz_kernel(int n, double sigma_ueV, double dt) {
  const double s = ueV_to_omega(sigma_ueV) * dt;
  Eigen::VectorXd k(n);
  for (int d = 0; d < n; ++d) k[d] = std::exp(-s * s * double(d) * d);
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = k[std::abs(i - j)];
  return m;
}

// sum_{t, s} B(t) B(s) K(t - s) over both photon times.
Complex double_overlap(const Eigen::MatrixXcd &b, const Wandering &w,
                       double dt) {
  const int n = static_cast<int>(b.rows());
  if (!w.active()) {
    const Complex s = b.sum();
    return s * s;
  }
  if (w.mode == Wandering::Mode::Correlated) {
    // The kernel depends on tau1 + tau2 only.
    Eigen::VectorXcd agg = Eigen::VectorXcd::Zero(2 * n - 1);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) agg[i + j] += b(i, j);
    const double s = ueV_to_omega(w.sigma_x) * dt;
    const int len = 2 * n - 1;
    Eigen::VectorXd k(len);
    for (int d = 0; d < len; ++d) k[d] = std::exp(-s * s * double(d) * d);
    Complex acc = 0.0;
    for (int u = 0; u < len; ++u) {
      if (agg[u] == 0.0) continue;
      Complex row = 0.0;
      for (int v = 0; v < len; ++v) row += agg[v] * k[std::abs(u - v)];
      acc += agg[u] * row;
    }
    return acc;
  }
  const Eigen::MatrixXd k1 = toeplitz_kernel(n, w.sigma_xx, dt);
  const Eigen::MatrixXd k2 = toeplitz_kernel(n, w.sigma_x, dt);
  const Eigen::MatrixXd br = b.real(), bi = b.imag();
  const Eigen::MatrixXd cr = k1 * br * k2, ci = k1 * bi * k2;
  return {br.cwiseProduct(cr).sum() - bi.cwiseProduct(ci).sum(),
          br.cwiseProduct(ci).sum() + bi.cwiseProduct(cr).sum()};
}

// sum_{c, d} M(c, d) M(d, c) exp(-sigma^2 (c - d)^2 dt^2).
Complex single_overlap(const Eigen::MatrixXcd &m, double sigma_ueV,
                       double dt) {
  const int n = static_cast<int>(m.rows());
  const double s = ueV_to_omega(sigma_ueV) * dt;
  Eigen::VectorXd k(n);
  for (int d = 0; d < n; ++d) k[d] = std::exp(-s * s * double(d) * d);
  Complex acc = 0.0;
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c) acc += m(c, d) * m(d, c) * k[std::abs(c - d)];
  return acc;
}

}  // namespace

FusionOutcome fuse_analytic(const EmitterParams &params, const TimeGrid &grid,
                            const FusionConfig &config,
                            const PairImperfections &imp) {
  params.validate();
  grid.validate();
  config.validate();
  imp.validate();
  require(imp.hv_admixture == 0, ErrorCode::Unsupported,
          "fuse_analytic does not support hv_admixture; use fuse");
  const PairState pair = pair_state(params, grid);
  const double fss = config.fss_on ? params.fss : 0.0;
  const PairState used(pair.base_ptr(), fss);
  const Eigen::MatrixXcd h = used.amplitude(Pol::H).unit_matrix();
  const Eigen::MatrixXcd v = used.amplitude(Pol::V).unit_matrix();
  const double dt = grid.dt();

  Complex ov;
  const Wandering &w = config.wandering;
  switch (config.scheme) {
    case Scheme::DoublePbs:
      ov = double_overlap(v.conjugate().cwiseProduct(h), w, dt);
      break;
    case Scheme::SinglePbsX: {
      const Eigen::MatrixXcd m = h.transpose() * v.conjugate();
      ov = single_overlap(m, w.active() ? w.sigma_x : 0.0, dt);
      break;
    }
    case Scheme::SinglePbsXX: {
      const Eigen::MatrixXcd m = h * v.adjoint();
      ov = single_overlap(m, w.active() ? w.sigma_xx : 0.0, dt);
      break;
    }
  }

  // Populations follow from the routing alone: run the network on a
  // one-mode stand-in whose coherent cross term is exactly the weight.
  auto unit = std::make_shared<SchmidtDecomposition>();
  unit->grid = grid;
  unit->coefficients = Eigen::VectorXd::Ones(1);
  unit->modes_xx = Eigen::MatrixXcd::Zero(grid.n_bins, 1);
  unit->modes_xx(0, 0) = 1.0;
  unit->modes_x = unit->modes_xx;
  unit->real = true;
  PairSource src{unit, pair_components(0.0, false, imp)};
  FusionConfig plain = config;
  plain.wandering = Wandering::off();
  plain.fss_on = false;
  plain.path_overlap = 1.0;
  NetworkResult r =
      run_network(fusion_network(config.scheme), {&src, &src}, plain);
  const int last = static_cast<int>(r.rho.rows()) - 1;
  const double weight = std::abs(r.rho(0, last));
  // Both slots see photons from different pairs in the cross term.
  const double path = config.path_overlap * config.path_overlap *
                      (config.scheme == Scheme::DoublePbs
                           ? config.path_overlap * config.path_overlap
                           : 1.0);
  r.rho(0, last) = weight * path * ov;
  r.rho(last, 0) = std::conj(r.rho(0, last));
  r.residual = 0.0;
  r.modes = 0;
  return outcome_from_network(r, config.phi_offset);
}

}  // namespace qdfusion
