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

#include "lattice_sampler.hpp"
#include "qdfusion/experiment.hpp"

namespace qdfusion {

namespace {

struct Estimates {
  double population;
  double coherence;
  double phase;
  double fidelity;
};

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

Estimates estimate(const MeasurementRecord &hv,
                   const std::vector<MeasurementRecord> &scan,
                   const std::vector<double> &thetas, int n,
                   CoherenceScan *out_scan = nullptr) {
  CoherenceScan cs;
  cs.thetas = thetas;
  for (const auto &r : scan) cs.values.push_back(parity(r));
  const CoherenceFit fit = coherence_fit(cs, n);
  Estimates e;
  e.population = population(hv.histogram, n);
  e.coherence = fit.coherence;
  e.phase = fit.phase;
  // Counting noise can push the fitted amplitude past one.
  e.fidelity = ghz_fidelity(clamp01(e.population), clamp01(e.coherence));
  if (out_scan) {
    for (double v : cs.values)
      cs.errors.push_back(
          std::sqrt(std::max(1 - v * v, 1e-12) / double(hv.shots)));
    *out_scan = cs;
  }
  return e;
}

MeasurementRecord resample(const MeasurementRecord &r, std::mt19937_64 &rng) {
  std::vector<double> p(r.histogram.begin(), r.histogram.end());
  MeasurementRecord out = r;
  out.histogram = detail::multinomial(r.shots, p, rng);
  return out;
}

double sd(const std::vector<double> &x) {
  double m = 0;
  for (double v : x) m += v;
  m /= double(x.size());
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / double(x.size() - 1));
}

}  // namespace

EndToEndResult estimate_from_state(const FusionOutcome &exact, Scheme scheme,
                                   std::uint64_t shots, std::uint64_t seed,
                                   const EndToEndOptions &options) {
  require(shots >= 1, ErrorCode::InvalidParameter, "shots must be >= 1");
  require(options.bootstrap >= 2, ErrorCode::InvalidParameter,
          "bootstrap needs at least 2 resamples");
  require(options.thetas.size() >= 4, ErrorCode::InvalidParameter,
          "coherence scan needs at least 4 angles");
  const PolarizationState &s = exact.state;
  const int n = s.n_qubits();
  const MeasurementRecord hv = sample_outcomes(
      s, MeasurementSetting::hv(n), shots, detail::derive_seed(seed, 1, 0),
      options.workers);
  std::vector<MeasurementRecord> scan;
  for (std::size_t i = 0; i < options.thetas.size(); ++i)
    scan.push_back(sample_outcomes(
        s, MeasurementSetting::m_theta(n, options.thetas[i]), shots,
        detail::derive_seed(seed, 2, i), options.workers));

  EndToEndResult res{scheme, exact, {}, {}, {}, 0.0, {}, 0};
  res.shots = shots;
  const Estimates point = estimate(hv, scan, options.thetas, n, &res.scan);
  res.phase = point.phase;

  const int b = options.bootstrap;
  std::vector<double> pop(b), coh(b), fid(b);
  detail::parallel_for(b, options.workers, [&](int k) {
    std::mt19937_64 rng(detail::derive_seed(seed, 3, std::uint64_t(k)));
    const MeasurementRecord hv_k = resample(hv, rng);
    std::vector<MeasurementRecord> scan_k;
    for (const auto &r : scan) scan_k.push_back(resample(r, rng));
    const Estimates e = estimate(hv_k, scan_k, options.thetas, n);
    pop[k] = e.population;
    coh[k] = e.coherence;
    fid[k] = e.fidelity;
  });
  res.population = {point.population, sd(pop)};
  res.coherence = {point.coherence, sd(coh)};
  res.fidelity = {point.fidelity, sd(fid)};
  return res;
}

EndToEndResult end_to_end(const SourceModel &model, Scheme scheme,
                          std::uint64_t shots, std::uint64_t seed,
                          const EndToEndOptions &options) {
  model.validate();
  const PairState pair = pair_state(model.emitter, model.grid);
  FusionConfig config = model.fusion_config(scheme);
  config.workers = options.workers;
  const FusionOutcome exact = fuse(pair, pair, config, model.imperfections);
  return estimate_from_state(exact, scheme, shots, seed, options);
}

}  // namespace qdfusion
