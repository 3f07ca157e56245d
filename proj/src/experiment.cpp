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

#include "qdfusion/experiment.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "lattice_sampler.hpp"

namespace qdfusion {

namespace {

constexpr std::uint64_t kShotBlock = 1 << 16;

std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Eigen::Matrix2cd basis_for(char label) {
  const Eigen::Vector2cd k = polarization_ket(label);
  Eigen::Matrix2cd b;
  b.col(0) = k;
  // Orthogonal partner with a fixed phase convention.
  b.col(1) << -std::conj(k[1]), std::conj(k[0]);
  return b;
}

}  // namespace

MeasurementSetting MeasurementSetting::hv(int n) {
  require(n >= 1 && n <= kMaxQubits, ErrorCode::InvalidParameter,
          "qubit count must be between 1 and 6");
  return {std::string(std::size_t(n), 'Z'),
          std::vector<Eigen::Matrix2cd>(std::size_t(n),
                                        Eigen::Matrix2cd::Identity())};
}

MeasurementSetting MeasurementSetting::m_theta(int n, double theta) {
  require(n >= 1 && n <= kMaxQubits, ErrorCode::InvalidParameter,
          "qubit count must be between 1 and 6");
  const double r = std::numbers::sqrt2 / 2;
  Eigen::Matrix2cd b;
  b << r, r, std::polar(r, theta), -std::polar(r, theta);
  char buf[64];
  std::snprintf(buf, sizeof buf, "M(%.17g)", theta);
  return {buf, std::vector<Eigen::Matrix2cd>(std::size_t(n), b)};
}

MeasurementSetting MeasurementSetting::labels(const std::string &letters) {
  require(!letters.empty() && letters.size() <= std::size_t(kMaxQubits),
          ErrorCode::InvalidParameter, "setting needs 1 to 6 labels");
  MeasurementSetting s{letters, {}};
  for (char c : letters) s.bases.push_back(basis_for(c));
  return s;
}

void MeasurementRecord::validate() const {
  require(shots >= 1, ErrorCode::InvalidData, "record without shots");
  std::uint64_t sum = 0;
  for (auto c : histogram) sum += c;
  require(sum <= shots, ErrorCode::InvalidData,
          "record counts exceed the shot number");
}

std::vector<double> outcome_probabilities(const PolarizationState &s,
                                          const MeasurementSetting &setting) {
  const int n = s.n_qubits();
  require(setting.n_qubits() == n, ErrorCode::DimensionMismatch,
          "setting and state differ in qubit number");
  Eigen::MatrixXcd u = setting.bases[0].adjoint();
  for (int q = 1; q < n; ++q) u = tensor(u, setting.bases[q].adjoint());
  const Eigen::MatrixXcd r = u * s.matrix() * u.adjoint();
  std::vector<double> p(std::size_t(s.dim()));
  for (int i = 0; i < s.dim(); ++i) p[i] = std::max(r(i, i).real(), 0.0);
  return p;
}

MeasurementRecord sample_outcomes(const PolarizationState &s,
                                  const MeasurementSetting &setting,
                                  std::uint64_t shots, std::uint64_t seed,
                                  int workers) {
  require(shots >= 1, ErrorCode::InvalidParameter, "shots must be >= 1");
  const std::vector<double> p = outcome_probabilities(s, setting);
  const std::uint64_t stream = fnv1a(setting.label);
  const int blocks = int((shots + kShotBlock - 1) / kShotBlock);
  std::vector<std::vector<std::uint64_t>> part(static_cast<std::size_t>(blocks));
  detail::parallel_for(blocks, workers, [&](int b) {
    const std::uint64_t n =
        std::min<std::uint64_t>(kShotBlock, shots - std::uint64_t(b) * kShotBlock);
    std::mt19937_64 rng(detail::derive_seed(seed, stream, std::uint64_t(b)));
    part[b] = detail::multinomial(n, p, rng);
  });
  MeasurementRecord rec{setting.label,
                        std::vector<std::uint64_t>(p.size(), 0), shots, seed};
  for (const auto &h : part)
    for (std::size_t i = 0; i < h.size(); ++i) rec.histogram[i] += h[i];
  return rec;
}

double parity(const MeasurementRecord &r) {
  r.validate();
  double acc = 0;
  for (std::size_t o = 0; o < r.histogram.size(); ++o)
    acc += (std::popcount(o) % 2 ? -1.0 : 1.0) * double(r.histogram[o]);
  return acc / double(r.shots);
}

void SourceModel::validate() const {
  emitter.validate();
  grid.validate();
  imperfections.validate();
  require(pair_fidelity_target > 0 && pair_fidelity_target <= 1,
          ErrorCode::InvalidParameter, "pair fidelity target must lie in (0, 1]");
  require(fss_share >= 0 && fss_share <= 1, ErrorCode::InvalidParameter,
          "fss_share must lie in [0, 1]");
  require(multiphoton_prob >= 0 && multiphoton_prob <= 1,
          ErrorCode::InvalidParameter, "multiphoton_prob must lie in [0, 1]");
  require(efficiency > 0 && efficiency <= 1, ErrorCode::InvalidParameter,
          "efficiency must lie in (0, 1]");
  require(window > 0, ErrorCode::InvalidParameter, "window must be > 0");
  require(rep_rate > 0, ErrorCode::InvalidParameter, "rep_rate must be > 0");
  if (wandering_mode == Wandering::Mode::Correlated)
    require(emitter.sigma_x == emitter.sigma_xx, ErrorCode::InvalidParameter,
            "correlated wandering needs sigma_x == sigma_xx");
}

SourceModel SourceModel::reference() {
  SourceModel m;
  m.emitter = reference_emitter();
  m.grid = TimeGrid::for_emitter(m.emitter);
  return m;
}

Wandering SourceModel::wandering() const {
  switch (wandering_mode) {
    case Wandering::Mode::Off:
      return Wandering::off();
    case Wandering::Mode::Correlated:
      return Wandering::correlated(emitter.sigma_x);
    case Wandering::Mode::Independent:
      break;
  }
  return Wandering::independent(emitter.sigma_x, emitter.sigma_xx);
}

FusionConfig SourceModel::fusion_config(Scheme scheme) const {
  FusionConfig c;
  c.scheme = scheme;
  c.wandering = wandering();
  return c;
}

HbtResult simulate_hbt(const SourceModel &model, std::uint64_t shots,
                       std::uint64_t seed, const HbtOptions &opt) {
  model.validate();
  require(shots >= 10000, ErrorCode::InvalidParameter,
          "HBT needs at least 1e4 pulses");
  require(opt.side_peaks >= 1, ErrorCode::InvalidParameter,
          "HBT needs at least one side peak");
  require(!opt.poissonian || opt.mean_photons > 0, ErrorCode::InvalidParameter,
          "Poissonian mean must be > 0");
  const int k_max = opt.side_peaks;
  const int blocks = int((shots + kShotBlock - 1) / kShotBlock);
  // Per block: center count, side counts for k = 1..K in both directions,
  // and the number of pulse pairs each delay spans.
  struct Tally {
    std::uint64_t center = 0;
    std::vector<std::uint64_t> side;
    std::vector<std::uint64_t> pairs;
    std::uint64_t pulses = 0;
  };
  std::vector<Tally> tally(static_cast<std::size_t>(blocks));
  detail::parallel_for(blocks, 1, [&](int b) {
    const std::uint64_t n =
        std::min<std::uint64_t>(kShotBlock, shots - std::uint64_t(b) * kShotBlock);
    std::mt19937_64 rng(detail::derive_seed(seed, 0x4b7, std::uint64_t(b)));
    std::bernoulli_distribution extra(model.multiphoton_prob);
    std::bernoulli_distribution detect(model.efficiency);
    std::bernoulli_distribution side(0.5);
    std::poisson_distribution<int> poisson(opt.mean_photons);
    std::vector<std::uint8_t> d1(n, 0), d2(n, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      const int photons = opt.poissonian ? poisson(rng) : 1 + int(extra(rng));
      for (int k = 0; k < photons; ++k) {
        if (!detect(rng)) continue;
        if (side(rng))
          d1[i] = 1;
        else
          d2[i] = 1;
      }
    }
    Tally &t = tally[b];
    t.pulses = n;
    t.side.assign(std::size_t(2 * k_max), 0);
    t.pairs.assign(std::size_t(2 * k_max), 0);
    for (std::uint64_t i = 0; i < n; ++i) t.center += d1[i] & d2[i];
    for (int k = 1; k <= k_max; ++k) {
      if (std::uint64_t(k) >= n) continue;
      std::uint64_t fwd = 0, bwd = 0;
      for (std::uint64_t i = 0; i + k < n; ++i) {
        fwd += d1[i] & d2[i + k];
        bwd += d2[i] & d1[i + k];
      }
      t.side[2 * (k - 1)] = fwd;
      t.side[2 * (k - 1) + 1] = bwd;
      t.pairs[2 * (k - 1)] = t.pairs[2 * (k - 1) + 1] = n - k;
    }
  });
  std::uint64_t center = 0, pulses = 0;
  std::vector<double> side(std::size_t(2 * k_max), 0), pairs(side.size(), 0);
  for (const Tally &t : tally) {
    center += t.center;
    pulses += t.pulses;
    for (std::size_t j = 0; j < side.size(); ++j) {
      side[j] += double(t.side[j]);
      pairs[j] += double(t.pairs[j]);
    }
  }
  double side_rate = 0, side_counts = 0;
  for (std::size_t j = 0; j < side.size(); ++j) {
    side_rate += side[j] / pairs[j];
    side_counts += side[j];
  }
  side_rate /= double(side.size());
  HbtResult r;
  r.center = center;
  r.side_mean = side_counts / double(side.size());
  require(side_rate > 0, ErrorCode::InvalidData,
          "no side-peak coincidences; increase shots");
  const double center_rate = double(center) / double(pulses);
  r.g2_zero = center_rate / side_rate;
  // Counting errors of the center and of the pooled side peaks.
  const double rel_side = 1.0 / std::sqrt(side_counts);
  const double abs_center =
      std::sqrt(std::max<double>(double(center), 1.0)) / double(pulses);
  r.std_error = std::hypot(abs_center / side_rate, r.g2_zero * rel_side);
  return r;
}

double hbt_g2_expected(const SourceModel &model, const HbtOptions &opt) {
  if (opt.poissonian) return 1.0;
  const double p = model.multiphoton_prob, eta = model.efficiency;
  const double d = 1 + p * (1 - eta / 2);
  return 2 * p / (d * d);
}

double rabi_population(double power, double pi_power, double exponent) {
  require(power >= 0 && std::isfinite(power), ErrorCode::InvalidParameter,
          "power must be >= 0");
  require(pi_power > 0, ErrorCode::InvalidParameter, "pi_power must be > 0");
  require(exponent > 0, ErrorCode::InvalidParameter, "exponent must be > 0");
  const double s = std::sin(0.5 * std::numbers::pi *
                            std::pow(power / pi_power, exponent));
  return s * s;
}

HomVisibilities hom_visibilities(const SourceModel &model) {
  model.validate();
  const TemporalAmplitude amp = discretize(model.emitter, model.grid);
  const Wandering w = model.wandering();
  const double sx = w.active() ? w.sigma_x : 0.0;
  const double sxx = w.active() ? w.sigma_xx : 0.0;
  const ReducedDensity rx = dephase(reduced_density(amp, Line::X), sx);
  const ReducedDensity rxx = dephase(reduced_density(amp, Line::XX), sxx);
  return {hom_pbs(rx, rx).visibility, hom_pbs(rxx, rxx).visibility};
}

HomEstimate simulate_hom(const HomResult &exact, std::uint64_t shots,
                         std::uint64_t seed) {
  require(shots >= 1, ErrorCode::InvalidParameter, "shots must be >= 1");
  const double q = exact.p_parallel / (exact.p_parallel + exact.p_cross);
  std::mt19937_64 rng(detail::derive_seed(seed, 0x40e, 0));
  std::binomial_distribution<std::uint64_t> bin(shots, q);
  HomEstimate e;
  e.parallel = bin(rng);
  e.cross = shots - e.parallel;
  e.visibility = (double(e.parallel) - double(e.cross)) / double(shots);
  e.std_error =
      std::sqrt(std::max(0.0, 1 - e.visibility * e.visibility) / double(shots));
  return e;
}

}  // namespace qdfusion
