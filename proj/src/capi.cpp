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

#include "qdfusion/qdfusion.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "qdfusion/cascade.hpp"
#include "qdfusion/experiment.hpp"
#include "qdfusion/fusion.hpp"
#include "qdfusion/metrics.hpp"
#include "qdfusion/multiplex.hpp"
#include "qdfusion/polarization.hpp"

#ifndef QDF_VERSION_STRING
#define QDF_VERSION_STRING "0.0.0"
#endif

struct qdf_amplitude {
  qdfusion::TemporalAmplitude amp;
};

struct qdf_state {
  qdfusion::PolarizationState state;
};

namespace {

using namespace qdfusion;

thread_local std::string g_last_error;

struct NullArgument {};
struct BufferTooSmall {
  const char *what;
};

qdf_status code_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParameter: return QDF_ERR_INVALID_PARAMETER;
    case ErrorCode::DimensionMismatch: return QDF_ERR_DIMENSION;
    case ErrorCode::InvalidData: return QDF_ERR_INVALID_DATA;
    case ErrorCode::UnreachableTarget: return QDF_ERR_UNREACHABLE;
    case ErrorCode::Truncation: return QDF_ERR_TRUNCATION;
    case ErrorCode::Unsupported: return QDF_ERR_UNSUPPORTED;
  }
  return QDF_ERR_INTERNAL;
}

template <typename F>
qdf_status guard(F &&f) {
  try {
    f();
    g_last_error.clear();
    return QDF_OK;
  } catch (const NullArgument &) {
    g_last_error = "null argument";
    return QDF_ERR_NULL_ARGUMENT;
  } catch (const BufferTooSmall &b) {
    g_last_error = b.what;
    return QDF_ERR_BUFFER_TOO_SMALL;
  } catch (const Error &e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return QDF_ERR_INTERNAL;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return QDF_ERR_INTERNAL;
  }
}

template <typename... P>
void need(const P *...ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument{};
}

EmitterParams to_cpp(const qdf_emitter &e) {
  EmitterParams p;
  p.gamma_xx = e.gamma_xx;
  p.gamma_x = e.gamma_x;
  p.fss = e.fss;
  p.sigma_x = e.sigma_x;
  p.sigma_xx = e.sigma_xx;
  p.pair_delay = e.pair_delay;
  return p;
}

qdf_emitter to_c(const EmitterParams &p) {
  return {p.gamma_xx, p.gamma_x, p.fss, p.sigma_x, p.sigma_xx, p.pair_delay};
}

TimeGrid to_cpp(const qdf_grid &g) { return {g.t_max, g.n_bins}; }

Wandering::Mode to_cpp(qdf_wandering_mode m) {
  switch (m) {
    case QDF_WANDERING_OFF: return Wandering::Mode::Off;
    case QDF_WANDERING_INDEPENDENT: return Wandering::Mode::Independent;
    case QDF_WANDERING_CORRELATED: return Wandering::Mode::Correlated;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown wandering mode");
}

qdf_wandering_mode to_c(Wandering::Mode m) {
  switch (m) {
    case Wandering::Mode::Off: return QDF_WANDERING_OFF;
    case Wandering::Mode::Independent: return QDF_WANDERING_INDEPENDENT;
    case Wandering::Mode::Correlated: return QDF_WANDERING_CORRELATED;
  }
  return QDF_WANDERING_OFF;
}

Scheme to_cpp(qdf_scheme s) {
  switch (s) {
    case QDF_SCHEME_SINGLE_PBS_X: return Scheme::SinglePbsX;
    case QDF_SCHEME_SINGLE_PBS_XX: return Scheme::SinglePbsXX;
    case QDF_SCHEME_DOUBLE_PBS: return Scheme::DoublePbs;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown scheme");
}

qdf_scheme to_c(Scheme s) {
  switch (s) {
    case Scheme::SinglePbsX: return QDF_SCHEME_SINGLE_PBS_X;
    case Scheme::SinglePbsXX: return QDF_SCHEME_SINGLE_PBS_XX;
    case Scheme::DoublePbs: return QDF_SCHEME_DOUBLE_PBS;
  }
  return QDF_SCHEME_DOUBLE_PBS;
}

Wandering wandering_of(qdf_wandering_mode m, double sx, double sxx) {
  switch (to_cpp(m)) {
    case Wandering::Mode::Off: return Wandering::off();
    case Wandering::Mode::Independent: return Wandering::independent(sx, sxx);
    case Wandering::Mode::Correlated:
      require(sx == sxx, ErrorCode::InvalidParameter,
              "correlated wandering needs sigma_x == sigma_xx");
      return Wandering::correlated(sx);
  }
  return Wandering::off();
}

FusionConfig to_cpp(const qdf_fusion_config &c) {
  FusionConfig f;
  f.scheme = to_cpp(c.scheme);
  f.fss_on = c.fss_on != 0;
  f.wandering = wandering_of(c.wandering, c.sigma_x, c.sigma_xx);
  f.schmidt_modes = c.schmidt_modes;
  f.schmidt_tolerance = c.schmidt_tolerance;
  f.max_residual = c.max_residual;
  f.detuning_samples = c.detuning_samples;
  f.seed = c.seed;
  f.phi_offset = c.phi_offset;
  f.path_overlap = c.path_overlap;
  f.workers = c.workers;
  f.validate();
  return f;
}

PairImperfections to_cpp(const qdf_imperfections *imp) {
  if (!imp) return {};
  PairImperfections p{imp->depolarization, imp->hv_admixture};
  p.validate();
  return p;
}

SourceModel to_cpp(const qdf_source_model &m) {
  SourceModel s;
  s.emitter = to_cpp(m.emitter);
  s.grid = to_cpp(m.grid);
  s.imperfections = to_cpp(&m.imperfections);
  s.wandering_mode = to_cpp(m.wandering);
  s.pair_fidelity_target = m.pair_fidelity_target;
  s.fss_share = m.fss_share;
  s.multiphoton_prob = m.multiphoton_prob;
  s.efficiency = m.efficiency;
  s.window = m.window;
  s.rep_rate = m.rep_rate;
  s.validate();
  return s;
}

qdf_source_model to_c(const SourceModel &s) {
  qdf_source_model m;
  m.emitter = to_c(s.emitter);
  m.grid = {s.grid.t_max, s.grid.n_bins};
  m.imperfections = {s.imperfections.depolarization,
                     s.imperfections.hv_admixture};
  m.wandering = to_c(s.wandering_mode);
  m.pair_fidelity_target = s.pair_fidelity_target;
  m.fss_share = s.fss_share;
  m.multiphoton_prob = s.multiphoton_prob;
  m.efficiency = s.efficiency;
  m.window = s.window;
  m.rep_rate = s.rep_rate;
  return m;
}

qdf_fusion_summary summary_of(const FusionOutcome &o) {
  return {o.success_probability, o.population,          o.coherence,
          o.phase,               o.truncation_residual, o.schmidt_modes_used};
}

LoopConfig to_cpp(const qdf_loop_config &c) {
  LoopConfig l;
  l.n_photons = c.n_photons;
  l.loop_loss = c.loop_loss;
  l.switch_loss = c.switch_loss;
  l.period = c.period;
  l.storage_overlap = c.storage_overlap;
  l.validate();
  return l;
}

void emit_state(const PolarizationState &s, qdf_state **out) {
  if (out) *out = new qdf_state{s};
}

}  // namespace

extern "C" {

const char *qdf_version(void) { return QDF_VERSION_STRING; }

const char *qdf_last_error(void) { return g_last_error.c_str(); }

const char *qdf_status_name(qdf_status s) {
  switch (s) {
    case QDF_OK: return "ok";
    case QDF_ERR_INVALID_PARAMETER: return "invalid parameter";
    case QDF_ERR_DIMENSION: return "dimension mismatch";
    case QDF_ERR_INVALID_DATA: return "invalid data";
    case QDF_ERR_UNREACHABLE: return "unreachable target";
    case QDF_ERR_TRUNCATION: return "truncation";
    case QDF_ERR_UNSUPPORTED: return "unsupported";
    case QDF_ERR_NULL_ARGUMENT: return "null argument";
    case QDF_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case QDF_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

qdf_emitter qdf_reference_emitter(void) { return to_c(reference_emitter()); }

qdf_status qdf_emitter_from_lifetimes(double t1_x, double t1_xx,
                                      qdf_emitter *out) {
  return guard([&] {
    need(out);
    *out = to_c(from_lifetimes(t1_x, t1_xx));
  });
}

qdf_status qdf_grid_for_emitter(const qdf_emitter *e, double span, int n_bins,
                                qdf_grid *out) {
  return guard([&] {
    need(e, out);
    const TimeGrid g = TimeGrid::for_emitter(to_cpp(*e), span, n_bins);
    *out = {g.t_max, g.n_bins};
  });
}

qdf_fusion_config qdf_default_fusion_config(void) {
  const FusionConfig f;
  return {to_c(f.scheme),        f.fss_on ? 1 : 0,
          QDF_WANDERING_OFF,     0.0,
          0.0,                   f.schmidt_modes,
          f.schmidt_tolerance,   f.max_residual,
          f.detuning_samples,    f.seed,
          f.phi_offset,          f.path_overlap,
          f.workers};
}

qdf_source_model qdf_reference_model(void) {
  return to_c(SourceModel::reference());
}

qdf_status qdf_scheme_parse(const char *name, qdf_scheme *out) {
  return guard([&] {
    need(name, out);
    *out = to_c(parse_scheme(name));
  });
}

const char *qdf_scheme_name(qdf_scheme s) {
  try {
    return scheme_name(to_cpp(s)).data();
  } catch (...) {
    return "unknown";
  }
}

qdf_status qdf_indistinguishability_bound(const qdf_emitter *e, double *out) {
  return guard([&] {
    need(e, out);
    *out = indistinguishability_bound(to_cpp(*e));
  });
}

qdf_status qdf_joint_spectrum(const qdf_emitter *e, double omega_xx,
                              double omega_x, double *out) {
  return guard([&] {
    need(e, out);
    const EmitterParams p = to_cpp(*e);
    p.validate();
    *out = joint_spectrum(p, omega_xx, omega_x);
  });
}

qdf_status qdf_amplitude_create(const qdf_emitter *e, const qdf_grid *g,
                                qdf_amplitude **out) {
  return guard([&] {
    need(e, g, out);
    *out = new qdf_amplitude{discretize(to_cpp(*e), to_cpp(*g))};
  });
}

void qdf_amplitude_free(qdf_amplitude *a) { delete a; }

qdf_status qdf_amplitude_info_get(const qdf_amplitude *a,
                                  qdf_amplitude_info *out) {
  return guard([&] {
    need(a, out);
    *out = {a->amp.truncated_mass(), a->amp.truncation_warning() ? 1 : 0,
            a->amp.grid().n_bins, a->amp.grid().dt()};
  });
}

qdf_status qdf_amplitude_density(const qdf_amplitude *a, double *out,
                                 size_t cap) {
  return guard([&] {
    need(a, out);
    const std::size_t n = std::size_t(a->amp.grid().n_bins);
    if (cap < n * n)
      throw BufferTooSmall{"density buffer needs n_bins^2 entries"};
    const Eigen::MatrixXcd &v = a->amp.values();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = std::norm(v(i, j));
  });
}

qdf_status qdf_amplitude_purity(const qdf_amplitude *a, qdf_line line,
                                double *out) {
  return guard([&] {
    need(a, out);
    *out = purity(reduced_density(
        a->amp, line == QDF_LINE_XX ? Line::XX : Line::X));
  });
}

qdf_status qdf_amplitude_schmidt(const qdf_amplitude *a, int max_modes,
                                 double tolerance, double *coefficients,
                                 size_t cap, int *count, double *residual) {
  return guard([&] {
    need(a, count);
    const SchmidtDecomposition d = schmidt(a->amp, max_modes, tolerance);
    *count = d.size();
    if (residual) *residual = d.residual;
    if (coefficients) {
      if (cap < std::size_t(d.size()))
        throw BufferTooSmall{"coefficient buffer too small"};
      for (int k = 0; k < d.size(); ++k) coefficients[k] = d.coefficients[k];
    }
  });
}

qdf_status qdf_amplitude_spectrum_error(const qdf_amplitude *a,
                                        const qdf_emitter *e, double *out) {
  return guard([&] {
    need(a, e, out);
    *out = spectrum_error(a->amp, to_cpp(*e));
  });
}

qdf_status qdf_hom(const qdf_emitter *e, const qdf_grid *g, qdf_line line,
                   double sigma, qdf_hom_result *out) {
  return guard([&] {
    need(e, g, out);
    const TemporalAmplitude amp = discretize(to_cpp(*e), to_cpp(*g));
    const ReducedDensity r = dephase(
        reduced_density(amp, line == QDF_LINE_XX ? Line::XX : Line::X), sigma);
    const HomResult h = hom_pbs(r, r);
    *out = {h.visibility, h.p_parallel, h.p_cross, h.success_probability};
  });
}

qdf_status qdf_fuse(const qdf_emitter *e, const qdf_grid *g,
                    const qdf_fusion_config *c, const qdf_imperfections *imp,
                    qdf_fusion_summary *summary, qdf_state **state) {
  return guard([&] {
    need(e, g, c);
    const PairState pair = pair_state(to_cpp(*e), to_cpp(*g));
    const FusionOutcome o = fuse(pair, pair, to_cpp(*c), to_cpp(imp));
    if (summary) *summary = summary_of(o);
    emit_state(o.state, state);
  });
}

qdf_status qdf_fuse_analytic(const qdf_emitter *e, const qdf_grid *g,
                             const qdf_fusion_config *c,
                             const qdf_imperfections *imp,
                             qdf_fusion_summary *summary, qdf_state **state) {
  return guard([&] {
    need(e, g, c);
    const FusionOutcome o =
        fuse_analytic(to_cpp(*e), to_cpp(*g), to_cpp(*c), to_cpp(imp));
    if (summary) *summary = summary_of(o);
    emit_state(o.state, state);
  });
}

qdf_status qdf_state_from_matrix(int n_qubits, const double *re,
                                 const double *im, qdf_state **out) {
  return guard([&] {
    need(re, out);
    require(n_qubits >= 1 && n_qubits <= kMaxQubits,
            ErrorCode::InvalidParameter, "qubit count must be between 1 and 6");
    const int d = 1 << n_qubits;
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        m(i, j) = Complex(re[i * d + j], im ? im[i * d + j] : 0.0);
    *out = new qdf_state{PolarizationState::from_matrix(m)};
  });
}

qdf_status qdf_state_ghz(int n_qubits, double phi, qdf_state **out) {
  return guard([&] {
    need(out);
    *out = new qdf_state{ghz_pure(n_qubits, phi)};
  });
}

qdf_status qdf_state_ghz_decomposition(int n_qubits, double phi,
                                       qdf_state **out) {
  return guard([&] {
    need(out);
    *out = new qdf_state{ghz_from_decomposition(n_qubits, phi)};
  });
}

void qdf_state_free(qdf_state *s) { delete s; }

int qdf_state_n_qubits(const qdf_state *s) {
  return s ? s->state.n_qubits() : 0;
}

qdf_status qdf_state_matrix(const qdf_state *s, double *re, double *im,
                            size_t cap) {
  return guard([&] {
    need(s, re, im);
    const int d = s->state.dim();
    if (cap < std::size_t(d) * d)
      throw BufferTooSmall{"matrix buffer needs 4^n entries"};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        re[i * d + j] = s->state(i, j).real();
        im[i * d + j] = s->state(i, j).imag();
      }
  });
}

qdf_status qdf_fidelity(const qdf_state *a, const qdf_state *b, double *out) {
  return guard([&] {
    need(a, b, out);
    *out = fidelity(a->state, b->state);
  });
}

qdf_status qdf_population(const qdf_state *s, double *out) {
  return guard([&] {
    need(s, out);
    *out = population(s->state);
  });
}

qdf_status qdf_coherence_scan(const qdf_state *s, const double *thetas,
                              size_t count, double *values) {
  return guard([&] {
    need(s, thetas, values);
    const CoherenceScan scan = coherence_scan(
        s->state, std::vector<double>(thetas, thetas + count));
    for (std::size_t i = 0; i < count; ++i) values[i] = scan.values[i];
  });
}

qdf_status qdf_coherence_fit(const double *thetas, const double *values,
                             const double *errors, size_t count, int n_qubits,
                             qdf_fit_result *out) {
  return guard([&] {
    need(thetas, values, out);
    CoherenceScan scan{std::vector<double>(thetas, thetas + count),
                       std::vector<double>(values, values + count),
                       errors ? std::vector<double>(errors, errors + count)
                              : std::vector<double>{}};
    const CoherenceFit f = coherence_fit(scan, n_qubits);
    *out = {f.coherence,          f.phase, f.coherence_err, f.phase_err,
            f.has_errors ? 1 : 0, f.degenerate ? 1 : 0};
  });
}

qdf_status qdf_coherence_eq3(const qdf_state *s, double phi, double *out) {
  return guard([&] {
    need(s, out);
    *out = coherence_eq3(s->state, s->state.n_qubits(), phi);
  });
}

qdf_status qdf_ghz_fidelity(double population, double coherence, double *out) {
  return guard([&] {
    need(out);
    *out = ghz_fidelity(population, coherence);
  });
}

qdf_status qdf_max_entangled_fidelity(const qdf_state *s, double *out) {
  return guard([&] {
    need(s, out);
    *out = max_entangled_fidelity(s->state);
  });
}

qdf_status qdf_concurrence(const qdf_state *s, double *out) {
  return guard([&] {
    need(s, out);
    *out = concurrence(s->state);
  });
}

qdf_status qdf_tomography(const char *const *labels, const int64_t *counts,
                          size_t count, int maximum_likelihood,
                          qdf_state **out) {
  return guard([&] {
    need(labels, counts, out);
    TomographyRecord rec;
    for (std::size_t i = 0; i < count; ++i) {
      need(labels[i]);
      rec.settings.emplace_back(labels[i]);
      rec.counts.push_back(counts[i]);
    }
    TomographyOptions opt;
    opt.maximum_likelihood = maximum_likelihood != 0;
    *out = new qdf_state{tomography_reconstruct(rec, opt)};
  });
}

qdf_status qdf_tomography_counts(const qdf_state *s, const char *const *labels,
                                 size_t count, uint64_t shots, uint64_t seed,
                                 int64_t *counts) {
  return guard([&] {
    need(s, labels, counts);
    require(s->state.n_qubits() == 2, ErrorCode::DimensionMismatch,
            "tomography counts need a two-qubit state");
    for (std::size_t i = 0; i < count; ++i) {
      need(labels[i]);
      const std::string label = labels[i];
      // Outcome 0 of both qubits is the projector named by the label.
      const MeasurementRecord r = sample_outcomes(
          s->state, MeasurementSetting::labels(label), shots, seed);
      counts[i] = std::int64_t(r.histogram[0]);
    }
  });
}

qdf_status qdf_calibrate(double v_x, double v_xx, double fidelity,
                         const qdf_source_model *base, qdf_source_model *out,
                         qdf_calibration_report *report) {
  return guard([&] {
    need(out);
    const SourceModel b = base ? to_cpp(*base) : SourceModel::reference();
    CalibrationOptions opt;
    opt.fss_share = b.fss_share;
    opt.wandering_mode = b.wandering_mode == Wandering::Mode::Off
                             ? Wandering::Mode::Independent
                             : b.wandering_mode;
    const CalibrationResult r = calibrate({v_x, v_xx, fidelity}, b, opt);
    *out = to_c(r.model);
    if (report)
      *report = {r.achieved.x, r.achieved.xx, r.pair_fidelity, r.bound_x,
                 r.bound_xx};
  });
}

qdf_status qdf_hom_visibilities(const qdf_source_model *m, double *v_x,
                                double *v_xx) {
  return guard([&] {
    need(m, v_x, v_xx);
    const HomVisibilities v = hom_visibilities(to_cpp(*m));
    *v_x = v.x;
    *v_xx = v.xx;
  });
}

qdf_status qdf_end_to_end(const qdf_source_model *m, qdf_scheme scheme,
                          uint64_t shots, uint64_t seed, int bootstrap,
                          int workers, qdf_end_to_end_result *out) {
  return guard([&] {
    need(m, out);
    EndToEndOptions opt;
    opt.bootstrap = bootstrap;
    opt.workers = workers;
    const EndToEndResult r =
        end_to_end(to_cpp(*m), to_cpp(scheme), shots, seed, opt);
    *out = {summary_of(r.exact), {r.population.value, r.population.error},
            {r.coherence.value, r.coherence.error},
            {r.fidelity.value, r.fidelity.error}, r.phase};
  });
}

qdf_status qdf_simulate_hbt(const qdf_source_model *m, uint64_t shots,
                            uint64_t seed, int poissonian, double mean_photons,
                            qdf_hbt_result *out) {
  return guard([&] {
    need(m, out);
    const SourceModel model = to_cpp(*m);
    HbtOptions opt;
    opt.poissonian = poissonian != 0;
    opt.mean_photons = mean_photons;
    const HbtResult r = simulate_hbt(model, shots, seed, opt);
    *out = {r.g2_zero, r.std_error, r.center, r.side_mean,
            hbt_g2_expected(model, opt)};
  });
}

qdf_status qdf_rabi_population(double power, double pi_power, double exponent,
                               double *out) {
  return guard([&] {
    need(out);
    *out = rabi_population(power, pi_power, exponent);
  });
}

qdf_status qdf_loop_schedule(const qdf_loop_config *c,
                             qdf_switch_window *windows, size_t cap,
                             size_t *count) {
  return guard([&] {
    need(c, count);
    const SwitchSchedule s = schedule(to_cpp(*c));
    *count = s.windows.size();
    if (windows) {
      if (cap < s.windows.size())
        throw BufferTooSmall{"schedule buffer too small"};
      for (std::size_t i = 0; i < s.windows.size(); ++i)
        windows[i] = {s.windows[i].switch_id, s.windows[i].start,
                      s.windows[i].end, s.windows[i].route};
    }
  });
}

qdf_status qdf_simulate_loop(const qdf_loop_config *c, const qdf_emitter *e,
                             const qdf_fusion_config *f, qdf_loop_result *out,
                             qdf_state **state) {
  return guard([&] {
    need(c, e, out);
    const FusionConfig fc =
        f ? to_cpp(*f) : FusionConfig{};
    const LoopResult r =
        simulate_loop(to_cpp(*c), to_cpp(*e), fc.wandering, fc);
    *out = {r.success_probability, r.population, r.coherence, r.phase};
    emit_state(r.state, state);
  });
}

}  // extern "C"
