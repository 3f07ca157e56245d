/* Copyright 2026 The qdfusion Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libqdfusion. Every call returns a qdf_status; on failure
 * qdf_last_error() describes the problem (thread local). Handles are opaque
 * and owned by the caller. Complex matrices travel as separate row-major
 * real and imaginary arrays. */

#ifndef QDFUSION_QDFUSION_H_
#define QDFUSION_QDFUSION_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QDF_BUILDING_LIBRARY)
#define QDF_API __attribute__((visibility("default")))
#else
#define QDF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qdf_status {
  QDF_OK = 0,
  QDF_ERR_INVALID_PARAMETER = 1,
  QDF_ERR_DIMENSION = 2,
  QDF_ERR_INVALID_DATA = 3,
  QDF_ERR_UNREACHABLE = 4,
  QDF_ERR_TRUNCATION = 5,
  QDF_ERR_UNSUPPORTED = 6,
  QDF_ERR_NULL_ARGUMENT = 7,
  QDF_ERR_BUFFER_TOO_SMALL = 8,
  QDF_ERR_INTERNAL = 9
} qdf_status;

typedef enum qdf_line { QDF_LINE_XX = 0, QDF_LINE_X = 1 } qdf_line;

typedef enum qdf_scheme {
  QDF_SCHEME_SINGLE_PBS_X = 0,
  QDF_SCHEME_SINGLE_PBS_XX = 1,
  QDF_SCHEME_DOUBLE_PBS = 2
} qdf_scheme;

typedef enum qdf_wandering_mode {
  QDF_WANDERING_OFF = 0,
  QDF_WANDERING_INDEPENDENT = 1,
  QDF_WANDERING_CORRELATED = 2
} qdf_wandering_mode;

/* Rates in 1/ps (amplitude), energies in ueV, times in ps. */
typedef struct qdf_emitter {
  double gamma_xx;
  double gamma_x;
  double fss;
  double sigma_x;
  double sigma_xx;
  double pair_delay;
} qdf_emitter;

typedef struct qdf_grid {
  double t_max;
  int n_bins;
} qdf_grid;

typedef struct qdf_fusion_config {
  qdf_scheme scheme;
  int fss_on;
  qdf_wandering_mode wandering;
  double sigma_x;
  double sigma_xx;
  int schmidt_modes;
  double schmidt_tolerance;
  double max_residual;
  int detuning_samples;
  uint64_t seed;
  double phi_offset;
  double path_overlap;
  int workers;
} qdf_fusion_config;

typedef struct qdf_imperfections {
  double depolarization;
  double hv_admixture;
} qdf_imperfections;

typedef struct qdf_fusion_summary {
  double success_probability;
  double population;
  double coherence;
  double phase;
  double truncation_residual;
  int schmidt_modes_used;
} qdf_fusion_summary;

typedef struct qdf_hom_result {
  double visibility;
  double p_parallel;
  double p_cross;
  double success_probability;
} qdf_hom_result;

typedef struct qdf_source_model {
  qdf_emitter emitter;
  qdf_grid grid;
  qdf_imperfections imperfections;
  qdf_wandering_mode wandering;
  double pair_fidelity_target;
  double fss_share;
  double multiphoton_prob;
  double efficiency;
  double window;
  double rep_rate;
} qdf_source_model;

typedef struct qdf_calibration_report {
  double v_x;
  double v_xx;
  double pair_fidelity;
  double bound_x;
  double bound_xx;
} qdf_calibration_report;

typedef struct qdf_estimate {
  double value;
  double error;
} qdf_estimate;

typedef struct qdf_end_to_end_result {
  qdf_fusion_summary exact;
  qdf_estimate population;
  qdf_estimate coherence;
  qdf_estimate fidelity;
  double phase;
} qdf_end_to_end_result;

typedef struct qdf_hbt_result {
  double g2_zero;
  double std_error;
  uint64_t center;
  double side_mean;
  double expected;
} qdf_hbt_result;

typedef struct qdf_loop_config {
  int n_photons;
  double loop_loss;
  double switch_loss;
  double period;
  double storage_overlap;
} qdf_loop_config;

typedef struct qdf_switch_window {
  int switch_id;
  double start;
  double end;
  int route;
} qdf_switch_window;

typedef struct qdf_loop_result {
  double success_probability;
  double population;
  double coherence;
  double phase;
} qdf_loop_result;

typedef struct qdf_fit_result {
  double coherence;
  double phase;
  double coherence_err;
  double phase_err;
  int has_errors;
  int degenerate;
} qdf_fit_result;

typedef struct qdf_amplitude_info {
  double truncated_mass;
  int truncation_warning;
  int n_bins;
  double dt;
} qdf_amplitude_info;

typedef struct qdf_amplitude qdf_amplitude;
typedef struct qdf_state qdf_state;

QDF_API const char *qdf_version(void);
QDF_API const char *qdf_last_error(void);
QDF_API const char *qdf_status_name(qdf_status s);

/* Defaults. */
QDF_API qdf_emitter qdf_reference_emitter(void);
QDF_API qdf_status qdf_emitter_from_lifetimes(double t1_x, double t1_xx,
                                              qdf_emitter *out);
QDF_API qdf_status qdf_grid_for_emitter(const qdf_emitter *e, double span,
                                        int n_bins, qdf_grid *out);
QDF_API qdf_fusion_config qdf_default_fusion_config(void);
QDF_API qdf_source_model qdf_reference_model(void);
QDF_API qdf_status qdf_scheme_parse(const char *name, qdf_scheme *out);
QDF_API const char *qdf_scheme_name(qdf_scheme s);

/* cascade */
QDF_API qdf_status qdf_indistinguishability_bound(const qdf_emitter *e,
                                                  double *out);
QDF_API qdf_status qdf_joint_spectrum(const qdf_emitter *e, double omega_xx,
                                      double omega_x, double *out);
QDF_API qdf_status qdf_amplitude_create(const qdf_emitter *e,
                                        const qdf_grid *g, qdf_amplitude **out);
QDF_API void qdf_amplitude_free(qdf_amplitude *a);
QDF_API qdf_status qdf_amplitude_info_get(const qdf_amplitude *a,
                                          qdf_amplitude_info *out);
/* |psi|^2 on the grid, n_bins^2 row-major (t1 rows). */
QDF_API qdf_status qdf_amplitude_density(const qdf_amplitude *a, double *out,
                                         size_t cap);
QDF_API qdf_status qdf_amplitude_purity(const qdf_amplitude *a, qdf_line line,
                                        double *out);
QDF_API qdf_status qdf_amplitude_schmidt(const qdf_amplitude *a,
                                         int max_modes, double tolerance,
                                         double *coefficients, size_t cap,
                                         int *count, double *residual);
/* Largest relative deviation between the lattice spectrum and the closed
 * form over the central half of the frequency axes. */
QDF_API qdf_status qdf_amplitude_spectrum_error(const qdf_amplitude *a,
                                                const qdf_emitter *e,
                                                double *out);

/* fusion */
QDF_API qdf_status qdf_hom(const qdf_emitter *e, const qdf_grid *g,
                           qdf_line line, double sigma, qdf_hom_result *out);
QDF_API qdf_status qdf_fuse(const qdf_emitter *e, const qdf_grid *g,
                            const qdf_fusion_config *c,
                            const qdf_imperfections *imp,
                            qdf_fusion_summary *summary, qdf_state **state);
QDF_API qdf_status qdf_fuse_analytic(const qdf_emitter *e, const qdf_grid *g,
                                     const qdf_fusion_config *c,
                                     const qdf_imperfections *imp,
                                     qdf_fusion_summary *summary,
                                     qdf_state **state);

/* polarization and metrics */
QDF_API qdf_status qdf_state_from_matrix(int n_qubits, const double *re,
                                         const double *im, qdf_state **out);
QDF_API qdf_status qdf_state_ghz(int n_qubits, double phi, qdf_state **out);
/* GHZ density rebuilt from its population and M(theta) coherence terms. */
QDF_API qdf_status qdf_state_ghz_decomposition(int n_qubits, double phi,
                                               qdf_state **out);
QDF_API void qdf_state_free(qdf_state *s);
QDF_API int qdf_state_n_qubits(const qdf_state *s);
QDF_API qdf_status qdf_state_matrix(const qdf_state *s, double *re,
                                    double *im, size_t cap);
QDF_API qdf_status qdf_fidelity(const qdf_state *a, const qdf_state *b,
                                double *out);
QDF_API qdf_status qdf_population(const qdf_state *s, double *out);
QDF_API qdf_status qdf_coherence_scan(const qdf_state *s, const double *thetas,
                                      size_t count, double *values);
QDF_API qdf_status qdf_coherence_fit(const double *thetas,
                                     const double *values,
                                     const double *errors, size_t count,
                                     int n_qubits, qdf_fit_result *out);
QDF_API qdf_status qdf_coherence_eq3(const qdf_state *s, double phi,
                                     double *out);
QDF_API qdf_status qdf_ghz_fidelity(double population, double coherence,
                                    double *out);
QDF_API qdf_status qdf_max_entangled_fidelity(const qdf_state *s,
                                              double *out);
QDF_API qdf_status qdf_concurrence(const qdf_state *s, double *out);
/* Labels are two-letter settings over {H,V,D,A,R,L}. */
QDF_API qdf_status qdf_tomography(const char *const *labels,
                                  const int64_t *counts, size_t count,
                                  int maximum_likelihood, qdf_state **out);
/* Synthetic counts: each setting sampled with `shots` trials. */
QDF_API qdf_status qdf_tomography_counts(const qdf_state *s,
                                         const char *const *labels,
                                         size_t count, uint64_t shots,
                                         uint64_t seed, int64_t *counts);

/* experiment */
QDF_API qdf_status qdf_calibrate(double v_x, double v_xx, double fidelity,
                                 const qdf_source_model *base,
                                 qdf_source_model *out,
                                 qdf_calibration_report *report);
QDF_API qdf_status qdf_hom_visibilities(const qdf_source_model *m,
                                        double *v_x, double *v_xx);
QDF_API qdf_status qdf_end_to_end(const qdf_source_model *m, qdf_scheme scheme,
                                  uint64_t shots, uint64_t seed, int bootstrap,
                                  int workers, qdf_end_to_end_result *out);
QDF_API qdf_status qdf_simulate_hbt(const qdf_source_model *m, uint64_t shots,
                                    uint64_t seed, int poissonian,
                                    double mean_photons, qdf_hbt_result *out);
QDF_API qdf_status qdf_rabi_population(double power, double pi_power,
                                       double exponent, double *out);

/* multiplex */
QDF_API qdf_status qdf_loop_schedule(const qdf_loop_config *c,
                                     qdf_switch_window *windows, size_t cap,
                                     size_t *count);
QDF_API qdf_status qdf_simulate_loop(const qdf_loop_config *c,
                                     const qdf_emitter *e,
                                     const qdf_fusion_config *f,
                                     qdf_loop_result *out, qdf_state **state);

#ifdef __cplusplus
}
#endif

#endif /* QDFUSION_QDFUSION_H_ */
