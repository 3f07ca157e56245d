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

#include <cmath>
#include <numbers>
#include <string>

#include "qdfusion/fusion.hpp"

namespace qdfusion {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::SinglePbsX:
      return "single_pbs_x";
    case Scheme::SinglePbsXX:
      return "single_pbs_xx";
    case Scheme::DoublePbs:
      return "double_pbs";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::SinglePbsX, Scheme::SinglePbsXX, Scheme::DoublePbs})
    if (scheme_name(s) == name) return s;
  throw Error(ErrorCode::InvalidParameter,
              "unknown scheme '" + std::string(name) +
                  "' (expected double_pbs, single_pbs_x or single_pbs_xx)");
}

std::string_view wandering_name(Wandering::Mode m) {
  switch (m) {
    case Wandering::Mode::Off:
      return "off";
    case Wandering::Mode::Independent:
      return "independent";
    case Wandering::Mode::Correlated:
      return "correlated";
  }
  return "unknown";
}

void Wandering::validate() const {
  require(std::isfinite(sigma_x) && std::isfinite(sigma_xx) && sigma_x >= 0 &&
              sigma_xx >= 0,
          ErrorCode::InvalidParameter, "wandering widths must be >= 0");
  if (mode == Mode::Correlated)
    require(sigma_x == sigma_xx, ErrorCode::InvalidParameter,
            "correlated wandering uses one width for both lines");
}

void PairImperfections::validate() const {
  require(depolarization >= 0 && depolarization <= 1,
          ErrorCode::InvalidParameter, "depolarization must lie in [0, 1]");
  require(hv_admixture >= 0 && hv_admixture <= 1, ErrorCode::InvalidParameter,
          "hv_admixture must lie in [0, 1]");
  require(depolarization + hv_admixture <= 1 + 1e-12,
          ErrorCode::InvalidParameter,
          "depolarization + hv_admixture must not exceed 1");
}

void FusionConfig::validate() const {
  wandering.validate();
  require(schmidt_modes >= 1, ErrorCode::InvalidParameter,
          "schmidt_modes must be >= 1");
  require(schmidt_tolerance >= 0, ErrorCode::InvalidParameter,
          "schmidt_tolerance must be >= 0");
  require(max_residual >= 0, ErrorCode::InvalidParameter,
          "max_residual must be >= 0");
  require(detuning_samples >= 1, ErrorCode::InvalidParameter,
          "detuning_samples must be >= 1");
  require(path_overlap >= 0 && path_overlap <= 1, ErrorCode::InvalidParameter,
          "path_overlap must lie in [0, 1]");
  require(std::isfinite(phi_offset), ErrorCode::InvalidParameter,
          "phi_offset must be finite");
  require(workers >= 1, ErrorCode::InvalidParameter, "workers must be >= 1");
}

GhzSummary ghz_summary(const PolarizationState &s) {
  const int last = s.dim() - 1;
  GhzSummary g;
  g.population = s(0, 0).real() + s(last, last).real();
  g.coherence = 2.0 * std::abs(s(0, last));
  double ph = std::arg(s(last, 0));
  if (ph < 0) ph += 2 * std::numbers::pi;
  g.phase = g.coherence > 0 ? ph : 0.0;
  return g;
}

HomResult hom_pbs(const ReducedDensity &a, const ReducedDensity &b) {
  require(a.matrix().rows() == b.matrix().rows(), ErrorCode::DimensionMismatch,
          "HOM inputs live on different grids");
  require(std::abs(a.trace() - 1) <= 1e-6 && std::abs(b.trace() - 1) <= 1e-6,
          ErrorCode::InvalidParameter, "HOM inputs must have unit trace");
  const double v =
      a.matrix().cwiseProduct(b.matrix().transpose()).sum().real();
  // Post-selected on one photon per PBS output; both inputs in |D>.
  return {v, (1 + v) / 4, (1 - v) / 4, 0.5};
}

ReducedDensity dephase(const ReducedDensity &rho, double sigma) {
  require(sigma >= 0 && std::isfinite(sigma), ErrorCode::InvalidParameter,
          "dephasing width must be >= 0");
  const TimeGrid &g = rho.grid();
  const double s = ueV_to_omega(sigma) * g.dt();
  const int n = static_cast<int>(rho.matrix().rows());
  Eigen::VectorXd k(n);
  for (int d = 0; d < n; ++d) k[d] = std::exp(-0.5 * s * s * double(d) * d);
  Eigen::MatrixXcd m = rho.matrix();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) *= k[std::abs(i - j)];
  return ReducedDensity(g, std::move(m));
}

int pbs_output(int input, Pol pol) {
  require(input == 0 || input == 1, ErrorCode::InvalidParameter,
          "PBS input port must be 0 or 1");
  return pol == Pol::H ? input : 1 - input;
}

Eigen::Matrix4cd pbs_mode_transform() {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  for (int in = 0; in < 2; ++in)
    for (Pol pol : {Pol::H, Pol::V}) {
      const int p = static_cast<int>(pol);
      u(2 * pbs_output(in, pol) + p, 2 * in + p) = 1.0;
    }
  return u;
}

std::vector<PairComponent> pair_components(double fss, bool fss_on,
                                           const PairImperfections &imp) {
  imp.validate();
  const double w = fss_on ? ueV_to_omega(fss) : 0.0;
  const double r = 1.0 / std::sqrt(2.0);
  const double p = imp.depolarization, h = imp.hv_admixture;
  std::vector<PairComponent> out;
  if (1 - p - h > 0)
    out.push_back({1 - p - h,
                   {{r, Pol::H, Pol::H, 0.0, 0.0},
                    {r, Pol::V, Pol::V, -w, w}}});
  if (p > 0)
    for (Pol a : {Pol::H, Pol::V})
      for (Pol b : {Pol::H, Pol::V}) out.push_back({p / 4, {{1.0, a, b, 0, 0}}});
  if (h > 0) {
    out.push_back({h / 2, {{1.0, Pol::H, Pol::V, 0, 0}}});
    out.push_back({h / 2, {{1.0, Pol::V, Pol::H, 0, 0}}});
  }
  return out;
}

PairSource make_pair_source(const PairState &pair, const FusionConfig &config,
                            const PairImperfections &imp) {
  config.validate();
  auto d = std::make_shared<const SchmidtDecomposition>(
      schmidt(pair.base(), config.schmidt_modes, config.schmidt_tolerance));
  return {d, pair_components(pair.fss(), config.fss_on, imp)};
}

PolarizationState pair_polarization_state(const PairState &pair,
                                          const PairImperfections &imp) {
  imp.validate();
  const double p = imp.depolarization, h = imp.hv_admixture;
  const double pure = 1 - p - h;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  rho(0, 0) = rho(3, 3) = pure / 2;
  const Complex c = pure > 0 ? 0.5 * pure * pair.overlap_vh() : 0.0;
  rho(0, 3) = c;
  rho(3, 0) = std::conj(c);
  rho += (p / 4) * Eigen::MatrixXcd::Identity(4, 4);
  rho(1, 1) += h / 2;
  rho(2, 2) += h / 2;
  return PolarizationState::from_matrix(rho);
}

InterferenceNetwork fusion_network(Scheme s) {
  InterferenceNetwork net;
  net.pairs = 2;
  net.slots = 2;
  switch (s) {
    case Scheme::DoublePbs:
      net.route = [](int pair, Line, Pol pol) { return pbs_output(pair, pol); };
      break;
    case Scheme::SinglePbsX:
      net.route = [](int pair, Line line, Pol pol) {
        return line == Line::X ? pbs_output(pair, pol) : pair;
      };
      break;
    case Scheme::SinglePbsXX:
      net.route = [](int pair, Line line, Pol pol) {
        return line == Line::XX ? pbs_output(pair, pol) : pair;
      };
      break;
  }
  return net;
}

FusionOutcome outcome_from_network(const NetworkResult &r, double phi_offset) {
  const double tr = r.rho.trace().real();
  require(tr > 0, ErrorCode::InvalidData, "network has no surviving events");
  Eigen::MatrixXcd rho = r.rho / tr;
  const int last = static_cast<int>(rho.rows()) - 1;
  if (phi_offset != 0.0) {
    const Complex e = std::polar(1.0, phi_offset);
    rho.row(last) *= e;
    rho.col(last) *= std::conj(e);
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  FusionOutcome out{PolarizationState::from_matrix(rho)};
  out.success_probability = tr;
  const GhzSummary g = ghz_summary(out.state);
  out.population = g.population;
  out.coherence = g.coherence;
  out.phase = g.phase;
  out.truncation_residual = r.residual;
  out.schmidt_modes_used = r.modes;
  return out;
}

FusionOutcome fuse(const PairSource &early, const PairSource &late,
                   const FusionConfig &config) {
  const InterferenceNetwork net = fusion_network(config.scheme);
  return outcome_from_network(run_network(net, {&early, &late}, config),
                              config.phi_offset);
}

FusionOutcome fuse(const PairState &early, const PairState &late,
                   const FusionConfig &config, const PairImperfections &imp) {
  config.validate();
  const TimeGrid &ge = early.base().grid(), &gl = late.base().grid();
  require(ge.n_bins == gl.n_bins && ge.t_max == gl.t_max,
          ErrorCode::DimensionMismatch, "pairs live on different grids");
  // Identically prepared pairs share one decomposition.
  PairSource a = make_pair_source(early, config, imp);
  PairSource b;
  if (early.base_ptr() == late.base_ptr())
    b = {a.schmidt, pair_components(late.fss(), config.fss_on, imp)};
  else
    b = make_pair_source(late, config, imp);
  return fuse(a, b, config);
}

}  // namespace qdfusion
