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


// Independent reference computations for the unit and acceptance tests.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "qdfusion/cascade.hpp"
#include "qdfusion/fusion.hpp"
#include "qdfusion/polarization.hpp"

namespace oracle {

using qdfusion::Complex;
constexpr double kPi = 3.14159265358979323846;

// Midpoint-lattice purity of the cascade amplitude, summed in closed form:
// tanh(g_xx dt) / tanh((g_xx + g_x) dt).
inline double lattice_purity(double g_xx, double g_x, double dt) {
  return std::tanh(g_xx * dt) / std::tanh((g_xx + g_x) * dt);
}

struct BruteFusion {
  double success = 0.0;
  double population = 0.0;
  double coherence = 0.0;
  Complex rho_hv;  // normalized <H..H|rho|V..V>
};

// Post-selected H..H / V..V block of two fused pairs, summed over every
// time-bin assignment of the four photons. Gaussian wandering enters as
// the exact average of the per-photon phase differences.
inline BruteFusion brute_force_fusion(const qdfusion::EmitterParams &p,
                                      const qdfusion::TimeGrid &grid,
                                      qdfusion::Scheme scheme, bool fss_on,
                                      const qdfusion::Wandering &w) {
  using qdfusion::Scheme;
  const int n = grid.n_bins;
  const double dt = grid.dt();
  // Unit-normalized lattice amplitudes.
  Eigen::MatrixXcd psi(n, n);
  double norm = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      psi(i, j) = qdfusion::cascade_amplitude(p, grid.time(i), grid.time(j));
      norm += std::norm(psi(i, j));
    }
  psi /= std::sqrt(norm);
  Eigen::MatrixXcd psi_v = psi;
  if (fss_on && p.fss != 0)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        psi_v(i, j) *= std::exp(Complex(0, -p.fss / qdfusion::kHbar *
                                               (grid.time(j) - grid.time(i))));

  // slot[k][line][pol]: slot of the photon of pair k, line (0 XX, 1 X).
  auto slot = [&](int k, int line, int pol) {
    const bool interferes = scheme == Scheme::DoublePbs ||
                            (scheme == Scheme::SinglePbsX && line == 1) ||
                            (scheme == Scheme::SinglePbsXX && line == 0);
    if (!interferes || pol == 0) return k;
    return 1 - k;
  };
  const double s_xx = w.mode == qdfusion::Wandering::Mode::Off
                          ? 0.0
                          : w.sigma_xx / qdfusion::kHbar;
  const double s_x =
      w.mode == qdfusion::Wandering::Mode::Off ? 0.0 : w.sigma_x / qdfusion::kHbar;
  const bool correlated = w.mode == qdfusion::Wandering::Mode::Correlated;

  double hh = 0, vv = 0;
  Complex hv = 0;
  std::array<int, 4> t{};  // bins of slot variables [xx0, x0, xx1, x1]
  for (t[0] = 0; t[0] < n; ++t[0])
    for (t[1] = 0; t[1] < n; ++t[1])
      for (t[2] = 0; t[2] < n; ++t[2])
        for (t[3] = 0; t[3] < n; ++t[3]) {
          Complex ah = 1, av = 1;
          double kernel_log = 0;
          for (int k = 0; k < 2; ++k) {
            const int xh = t[2 * slot(k, 0, 0)], yh = t[2 * slot(k, 1, 0) + 1];
            const int xv = t[2 * slot(k, 0, 1)], yv = t[2 * slot(k, 1, 1) + 1];
            ah *= psi(xh, yh);
            av *= psi_v(xv, yv);
            const double dxx = (xh - xv) * dt, dx = (yh - yv) * dt;
            if (correlated)
              kernel_log -= 0.5 * s_x * s_x * (dxx + dx) * (dxx + dx);
            else
              kernel_log -= 0.5 * (s_xx * s_xx * dxx * dxx + s_x * s_x * dx * dx);
          }
          hh += std::norm(ah);
          vv += std::norm(av);
          hv += ah * std::conj(av) * std::exp(kernel_log);
        }
  // Each pair contributes amplitude 1/sqrt2 per polarization.
  BruteFusion r;
  r.success = 0.25 * (hh + vv);
  const double tr = hh + vv;
  r.population = 1.0;
  r.rho_hv = hv / tr;
  r.coherence = 2 * std::abs(hv) / tr;
  return r;
}

// Fully entangled fraction by direct search over (1 x U)|Phi+>, U in SU(2).
inline double brute_force_fef(const Eigen::Matrix4cd &rho) {
  auto value = [&](double a, double b, double c) {
    Eigen::Matrix2cd u;
    const Complex e1 = std::exp(Complex(0, b)), e2 = std::exp(Complex(0, c));
    u << std::cos(a) * e1, -std::sin(a) * std::conj(e2), std::sin(a) * e2,
        std::cos(a) * std::conj(e1);
    Eigen::Vector4cd phi = Eigen::Vector4cd::Zero();
    // (1 x U)|Phi+>, basis index 2 * q0 + q1.
    for (int q0 = 0; q0 < 2; ++q0)
      for (int q1 = 0; q1 < 2; ++q1) phi(2 * q0 + q1) = u(q1, q0) / std::sqrt(2.0);
    return (phi.adjoint() * rho * phi)(0, 0).real();
  };
  double best = -1, ba = 0, bb = 0, bc = 0;
  const int g = 24;
  for (int i = 0; i <= g; ++i)
    for (int j = 0; j < 2 * g; ++j)
      for (int k = 0; k < 2 * g; ++k) {
        const double a = 0.5 * kPi * i / g, b = kPi * j / g, c = kPi * k / g;
        const double v = value(a, b, c);
        if (v > best) best = v, ba = a, bb = b, bc = c;
      }
  // Pattern search refinement.
  for (double step = kPi / g; step > 1e-9; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int d = 0; d < 3; ++d)
        for (int sgn : {-1, 1}) {
          double a = ba, b = bb, c = bc;
          (d == 0 ? a : d == 1 ? b : c) += sgn * step;
          const double v = value(a, b, c);
          if (v > best + 1e-15) {
            best = v, ba = a, bb = b, bc = c;
            moved = true;
          }
        }
    }
  }
  return best;
}

// Hilbert-Schmidt random two-qubit density matrix.
inline Eigen::Matrix4cd random_density(std::mt19937_64 &rng) {
  std::normal_distribution<double> nd;
  Eigen::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Complex(nd(rng), nd(rng));
  Eigen::Matrix4cd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline Eigen::Matrix2cd random_unitary(std::mt19937_64 &rng) {
  std::normal_distribution<double> nd;
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = Complex(nd(rng), nd(rng));
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  return qr.householderQ();
}

inline Eigen::Matrix4cd bell_phi_plus() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return m;
}

inline Eigen::Matrix4cd werner(double p) {
  return p * bell_phi_plus() +
         (1 - p) / 4 * Eigen::Matrix4cd::Identity();
}

// Two-sided binomial band: |k - n p| <= z sqrt(n p (1 - p)).
inline bool within_binomial(std::uint64_t k, std::uint64_t n, double p,
                            double z = 5.0) {
  const double mean = double(n) * p;
  return std::fabs(double(k) - mean) <= z * std::sqrt(mean * (1 - p));
}

}  // namespace oracle
