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
#include <functional>
#include <sstream>

#include "qdfusion/experiment.hpp"

namespace qdfusion {

namespace {

// Visibility of two identically dephased photons as a function of sigma.
// Only |rho(i, j)|^2 summed along diagonals is needed.
class VisibilityCurve {
 public:
  VisibilityCurve(const ReducedDensity &rho)
      : dt_(rho.grid().dt()), band_(rho.matrix().rows()) {
    const Eigen::MatrixXcd &m = rho.matrix();
    const Eigen::Index n = m.rows();
    band_.setZero();
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) band_[std::abs(i - j)] += std::norm(m(i, j));
  }

  double operator()(double sigma) const {
    const double s = ueV_to_omega(sigma) * dt_;
    double v = 0;
    for (Eigen::Index d = 0; d < band_.size(); ++d)
      v += band_[d] * std::exp(-s * s * double(d) * double(d));
    return v;
  }

 private:
  double dt_;
  Eigen::VectorXd band_;
};

// Root of a decreasing function f(x) = target on [0, inf).
double solve_decreasing(const std::function<double(double)> &f, double target,
                        double start, double tol) {
  if (f(0.0) <= target) return 0.0;
  double lo = 0.0, hi = start;
  int guard = 0;
  while (f(hi) > target) {
    lo = hi;
    hi *= 2;
    require(++guard < 60, ErrorCode::UnreachableTarget,
            "calibration target not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double pure_pair_fidelity(const std::shared_ptr<const TemporalAmplitude> &amp,
                          double fss) {
  return max_entangled_fidelity(pair_polarization_state(PairState(amp, fss)));
}

}  // namespace

CalibrationResult calibrate(const CalibrationTargets &targets,
                            const SourceModel &base,
                            const CalibrationOptions &options) {
  for (double t : {targets.v_x, targets.v_xx, targets.pair_fidelity})
    require(t > 0 && t <= 1, ErrorCode::InvalidParameter,
            "calibration targets must lie in (0, 1]");
  require(options.fss_share >= 0 && options.fss_share <= 1,
          ErrorCode::InvalidParameter, "fss_share must lie in [0, 1]");
  SourceModel model = base;
  model.emitter.sigma_x = model.emitter.sigma_xx = 0.0;
  model.emitter.fss = 0.0;
  model.imperfections = {};
  model.wandering_mode = options.wandering_mode;
  model.fss_share = options.fss_share;
  model.pair_fidelity_target = targets.pair_fidelity;
  model.validate();

  auto amp = std::make_shared<const TemporalAmplitude>(
      discretize(model.emitter, model.grid));
  const VisibilityCurve vx(reduced_density(*amp, Line::X));
  const VisibilityCurve vxx(reduced_density(*amp, Line::XX));
  CalibrationResult out{model, {0, 0}};
  out.bound_x = vx(0.0);
  out.bound_xx = vxx(0.0);

  const double slack = 1e-9;
  auto check_bound = [&](double v, double bound, const char *line) {
    if (v > bound + slack) {
      std::ostringstream msg;
      msg << "target " << line << " visibility " << v
          << " exceeds the cascade bound " << bound
          << " (gamma_xx/(gamma_xx+gamma_x) on this grid); wandering only "
             "lowers it";
      throw Error(ErrorCode::UnreachableTarget, msg.str());
    }
  };
  check_bound(targets.v_x, out.bound_x, "X");
  check_bound(targets.v_xx, out.bound_xx, "XX");

  const double tol = options.tolerance;
  if (options.wandering_mode == Wandering::Mode::Correlated) {
    const double s = solve_decreasing(vx, targets.v_x, 1.0, tol);
    model.emitter.sigma_x = model.emitter.sigma_xx = s;
  } else if (options.wandering_mode == Wandering::Mode::Independent) {
    model.emitter.sigma_x = solve_decreasing(vx, targets.v_x, 1.0, tol);
    model.emitter.sigma_xx = solve_decreasing(vxx, targets.v_xx, 1.0, tol);
  }

  // Pair infidelity split: FSS takes fss_share of 1 - F, white noise the
  // rest. With the FSS-only fidelity F_s, depolarization p gives
  // (1 - p) F_s + p/4.
  const double f = targets.pair_fidelity;
  require(f > 0.25, ErrorCode::UnreachableTarget,
          "pair fidelity target must exceed 1/4 (the fully mixed value)");
  const double f_fss = 1 - options.fss_share * (1 - f);
  const double f_floor = 0.5 + 1e-9;
  if (f_fss <= f_floor) {
    std::ostringstream msg;
    msg << "FSS alone cannot lower the pair fidelity below 0.5; fss_share "
        << options.fss_share << " asks for " << f_fss;
    throw Error(ErrorCode::UnreachableTarget, msg.str());
  }
  const double fss = solve_decreasing(
      [&](double s) { return pure_pair_fidelity(amp, s); }, f_fss, 1.0, tol);
  model.emitter.fss = fss;
  const double f_s = pure_pair_fidelity(amp, fss);
  model.imperfections.depolarization =
      f_s > f ? std::min(1.0, (f_s - f) / (f_s - 0.25)) : 0.0;

  out.model = model;
  out.achieved = hom_visibilities(model);
  out.pair_fidelity = max_entangled_fidelity(pair_polarization_state(
      PairState(amp, fss), model.imperfections));
  const double band = 0.005;
  std::ostringstream miss;
  if (std::abs(out.achieved.x - targets.v_x) > band)
    miss << " X visibility " << out.achieved.x << " vs " << targets.v_x << ';';
  if (std::abs(out.achieved.xx - targets.v_xx) > band)
    miss << " XX visibility " << out.achieved.xx << " vs " << targets.v_xx
         << ';';
  if (std::abs(out.pair_fidelity - f) > band)
    miss << " pair fidelity " << out.pair_fidelity << " vs " << f << ';';
  if (!miss.str().empty())
    throw Error(ErrorCode::UnreachableTarget,
                "calibration missed its targets:" + miss.str());
  return out;
}

}  // namespace qdfusion
