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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "qdfusion/cascade.hpp"

namespace qdfusion {

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 : std::sin(x) / x; }

}  // namespace

SpectrumGrid lattice_spectrum(const TemporalAmplitude &amp) {
  const int n = amp.grid().n_bins;
  const double dt = amp.grid().dt();
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd f = amp.values();
  std::vector<Complex> in(n), out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) in[j] = f(i, j);
    fft.fwd(out, in);
    for (int j = 0; j < n; ++j) f(i, j) = out[j];
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) in[i] = f(i, j);
    fft.fwd(out, in);
    for (int i = 0; i < n; ++i) f(i, j) = out[i];
  }

  SpectrumGrid s;
  s.omega_xx.resize(n);
  const double dw = 2.0 * std::numbers::pi / (n * dt);
  for (int k = 0; k < n; ++k) s.omega_xx[k] = dw * (k - n / 2);
  s.omega_x = s.omega_xx;
  s.density.resize(n, n);
  // The forward transform carries exp(-i w t); the density is even under a
  // joint sign flip, so only the magnitude matters.
  const double scale = dt * dt / (2.0 * std::numbers::pi);
  for (int a = 0; a < n; ++a) {
    const int qa = (a + n / 2) % n;
    for (int b = 0; b < n; ++b) {
      const int qb = (b + n / 2) % n;
      const double wxx = s.omega_xx[a], wx = s.omega_x[b];
      // A sample (i, j) stands for a cell that is square in (t1, t2 - t1).
      const double cell = sinc(0.5 * (wxx + wx) * dt) * sinc(0.5 * wx * dt);
      s.density(a, b) = std::norm(scale * f(qa, qb)) * cell * cell;
    }
  }
  return s;
}

SpectrumGrid spectrum_on_axes(const EmitterParams &p,
                              const Eigen::VectorXd &omega_xx,
                              const Eigen::VectorXd &omega_x) {
  SpectrumGrid s{omega_xx, omega_x,
                 Eigen::MatrixXd(omega_xx.size(), omega_x.size())};
  for (Eigen::Index a = 0; a < omega_xx.size(); ++a)
    for (Eigen::Index b = 0; b < omega_x.size(); ++b)
      s.density(a, b) = joint_spectrum(p, omega_xx[a], omega_x[b]);
  return s;
}

double spectrum_error(const TemporalAmplitude &amp, const EmitterParams &p) {
  const SpectrumGrid s = lattice_spectrum(amp);
  const int n = amp.grid().n_bins;
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    if (std::abs(a - n / 2) >= n / 4) continue;
    for (int b = 0; b < n; ++b) {
      if (std::abs(b - n / 2) >= n / 4) continue;
      const double ref = joint_spectrum(p, s.omega_xx[a], s.omega_x[b]);
      worst = std::max(worst, std::abs(s.density(a, b) - ref) / ref);
    }
  }
  return worst;
}

}  // namespace qdfusion
