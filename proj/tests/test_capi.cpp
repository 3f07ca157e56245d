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


// Exercises the shared library through its C header only.

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "qdfusion/qdfusion.h"

namespace {

qdf_grid small_grid(const qdf_emitter &e, int bins = 256) {
  qdf_grid g{};
  EXPECT_EQ(qdf_grid_for_emitter(&e, 12, bins, &g), QDF_OK);
  return g;
}

}  // namespace

TEST(CApi, VersionAndNames) {
  EXPECT_GT(std::string(qdf_version()).size(), 0u);
  EXPECT_STREQ(qdf_status_name(QDF_OK), "ok");
  EXPECT_STREQ(qdf_scheme_name(QDF_SCHEME_DOUBLE_PBS), "double_pbs");
  qdf_scheme s;
  EXPECT_EQ(qdf_scheme_parse("single_pbs_x", &s), QDF_OK);
  EXPECT_EQ(s, QDF_SCHEME_SINGLE_PBS_X);
  EXPECT_EQ(qdf_scheme_parse("nonsense", &s), QDF_ERR_INVALID_PARAMETER);
  EXPECT_GT(std::string(qdf_last_error()).size(), 0u);
}

TEST(CApi, NullArguments) {
  EXPECT_EQ(qdf_indistinguishability_bound(nullptr, nullptr),
            QDF_ERR_NULL_ARGUMENT);
  EXPECT_STREQ(qdf_last_error(), "null argument");
  qdf_emitter e = qdf_reference_emitter();
  EXPECT_EQ(qdf_indistinguishability_bound(&e, nullptr), QDF_ERR_NULL_ARGUMENT);
  EXPECT_EQ(qdf_state_ghz(4, 0, nullptr), QDF_ERR_NULL_ARGUMENT);
  qdf_amplitude_free(nullptr);
  qdf_state_free(nullptr);
  EXPECT_EQ(qdf_state_n_qubits(nullptr), 0);
}

TEST(CApi, BoundAndErrorClearing) {
  qdf_emitter e;
  EXPECT_EQ(qdf_emitter_from_lifetimes(-1, 1, &e), QDF_ERR_INVALID_PARAMETER);
  EXPECT_NE(std::string(qdf_last_error()), "");
  ASSERT_EQ(qdf_emitter_from_lifetimes(125.5, 38.8, &e), QDF_OK);
  EXPECT_STREQ(qdf_last_error(), "");
  double b = 0;
  ASSERT_EQ(qdf_indistinguishability_bound(&e, &b), QDF_OK);
  EXPECT_NEAR(b, 125.5 / (125.5 + 38.8), 1e-12);
}

TEST(CApi, AmplitudeBuffers) {
  const qdf_emitter e = qdf_reference_emitter();
  const qdf_grid g = small_grid(e, 64);
  qdf_amplitude *a = nullptr;
  ASSERT_EQ(qdf_amplitude_create(&e, &g, &a), QDF_OK);
  std::vector<double> d(64 * 64);
  EXPECT_EQ(qdf_amplitude_density(a, d.data(), d.size() - 1),
            QDF_ERR_BUFFER_TOO_SMALL);
  ASSERT_EQ(qdf_amplitude_density(a, d.data(), d.size()), QDF_OK);
  double sum = 0;
  for (double v : d) sum += v;
  qdf_amplitude_info info;
  ASSERT_EQ(qdf_amplitude_info_get(a, &info), QDF_OK);
  EXPECT_NEAR(sum * info.dt * info.dt, 1.0, 1e-12);
  int count = 0;
  double residual = 0, coeff[4];
  EXPECT_EQ(qdf_amplitude_schmidt(a, 32, 0, coeff, 4, &count, &residual),
            QDF_ERR_BUFFER_TOO_SMALL);
  ASSERT_EQ(qdf_amplitude_schmidt(a, 32, 0, nullptr, 0, &count, &residual),
            QDF_OK);
  EXPECT_GT(count, 4);
  double p = 0;
  ASSERT_EQ(qdf_amplitude_purity(a, QDF_LINE_X, &p), QDF_OK);
  EXPECT_GT(p, 0.5);
  EXPECT_LT(p, 1.0);
  qdf_amplitude_free(a);
}

TEST(CApi, FuseReturnsState) {
  const qdf_emitter e = qdf_reference_emitter();
  const qdf_grid g = small_grid(e);
  qdf_fusion_config c = qdf_default_fusion_config();
  c.scheme = QDF_SCHEME_SINGLE_PBS_XX;
  qdf_imperfections imp{0, 0};
  qdf_fusion_summary s;
  qdf_state *st = nullptr;
  ASSERT_EQ(qdf_fuse(&e, &g, &c, &imp, &s, &st), QDF_OK) << qdf_last_error();
  EXPECT_EQ(qdf_state_n_qubits(st), 4);
  std::vector<double> re(256), im(256);
  EXPECT_EQ(qdf_state_matrix(st, re.data(), im.data(), 255),
            QDF_ERR_BUFFER_TOO_SMALL);
  ASSERT_EQ(qdf_state_matrix(st, re.data(), im.data(), 256), QDF_OK);
  EXPECT_NEAR(2 * std::hypot(re[15], im[15]), s.coherence, 1e-12);
  qdf_fusion_summary a;
  ASSERT_EQ(qdf_fuse_analytic(&e, &g, &c, &imp, &a, nullptr), QDF_OK);
  EXPECT_NEAR(a.coherence, s.coherence, 1e-3);
  qdf_state_free(st);

  imp.hv_admixture = 0.1;
  EXPECT_EQ(qdf_fuse_analytic(&e, &g, &c, &imp, &a, nullptr),
            QDF_ERR_UNSUPPORTED);
  c.schmidt_modes = 4;
  imp.hv_admixture = 0;
  EXPECT_EQ(qdf_fuse(&e, &g, &c, &imp, &s, nullptr), QDF_ERR_TRUNCATION);
}

TEST(CApi, MetricsOnGhz) {
  qdf_state *g = nullptr;
  ASSERT_EQ(qdf_state_ghz(4, 0.5, &g), QDF_OK);
  double pop = 0, c3 = 0, f = 0;
  ASSERT_EQ(qdf_population(g, &pop), QDF_OK);
  ASSERT_EQ(qdf_coherence_eq3(g, 0.5, &c3), QDF_OK);
  ASSERT_EQ(qdf_ghz_fidelity(pop, c3, &f), QDF_OK);
  EXPECT_NEAR(pop, 1, 1e-12);
  EXPECT_NEAR(c3, 1, 1e-12);
  EXPECT_NEAR(f, 1, 1e-12);
  std::vector<double> th(10), v(10);
  for (int i = 0; i < 10; ++i) th[i] = i * M_PI / 9;
  ASSERT_EQ(qdf_coherence_scan(g, th.data(), th.size(), v.data()), QDF_OK);
  qdf_fit_result fit;
  ASSERT_EQ(qdf_coherence_fit(th.data(), v.data(), nullptr, 10, 4, &fit),
            QDF_OK);
  EXPECT_NEAR(fit.coherence, 1, 1e-12);
  EXPECT_NEAR(fit.phase, 0.5, 1e-12);
  qdf_state *d = nullptr;
  ASSERT_EQ(qdf_state_ghz_decomposition(4, 0.5, &d), QDF_OK);
  double fid = 0;
  ASSERT_EQ(qdf_fidelity(g, d, &fid), QDF_OK);
  EXPECT_NEAR(fid, 1, 1e-12);
  qdf_state_free(g);
  qdf_state_free(d);
}

TEST(CApi, TomographyRoundTrip) {
  const double re[16] = {0.5, 0, 0, 0.5, 0, 0, 0, 0, 0, 0, 0, 0, 0.5, 0, 0, 0.5};
  const double im[16] = {};
  qdf_state *bell = nullptr;
  ASSERT_EQ(qdf_state_from_matrix(2, re, im, &bell), QDF_OK);
  const char *letters = "HVDARL";
  std::vector<std::string> labels;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) labels.push_back({letters[i], letters[j]});
  std::vector<const char *> ptrs;
  for (const auto &l : labels) ptrs.push_back(l.c_str());
  std::vector<int64_t> counts(36);
  ASSERT_EQ(qdf_tomography_counts(bell, ptrs.data(), 36, 100000, 3,
                                  counts.data()),
            QDF_OK);
  qdf_state *rec = nullptr;
  ASSERT_EQ(qdf_tomography(ptrs.data(), counts.data(), 36, 1, &rec), QDF_OK);
  double f = 0, c = 0;
  ASSERT_EQ(qdf_max_entangled_fidelity(rec, &f), QDF_OK);
  ASSERT_EQ(qdf_concurrence(rec, &c), QDF_OK);
  EXPECT_NEAR(f, 1, 0.01);
  EXPECT_NEAR(c, 1, 0.02);
  EXPECT_EQ(qdf_tomography(ptrs.data(), counts.data(), 3, 1, &rec),
            QDF_ERR_INVALID_DATA);
  qdf_state_free(rec);
  qdf_state_free(bell);
  const double bad[16] = {2};
  EXPECT_NE(qdf_state_from_matrix(2, bad, im, &bell), QDF_OK);
}

TEST(CApi, ScheduleAndLoop) {
  qdf_loop_config c{6, 1, 1, 1.5, 1};
  size_t n = 0;
  ASSERT_EQ(qdf_loop_schedule(&c, nullptr, 0, &n), QDF_OK);
  EXPECT_EQ(n, 6u);
  std::vector<qdf_switch_window> w(n);
  EXPECT_EQ(qdf_loop_schedule(&c, w.data(), n - 1, &n),
            QDF_ERR_BUFFER_TOO_SMALL);
  ASSERT_EQ(qdf_loop_schedule(&c, w.data(), n, &n), QDF_OK);
  EXPECT_EQ(w[0].route, 1);
  EXPECT_EQ(w[5].route, 2);
  c.n_photons = 5;
  EXPECT_EQ(qdf_loop_schedule(&c, nullptr, 0, &n), QDF_ERR_INVALID_PARAMETER);
}

TEST(CApi, ExperimentEntryPoints) {
  double p = 0;
  ASSERT_EQ(qdf_rabi_population(1, 1, 1, &p), QDF_OK);
  EXPECT_NEAR(p, 1, 1e-15);
  qdf_source_model m = qdf_reference_model();
  qdf_hbt_result h;
  ASSERT_EQ(qdf_simulate_hbt(&m, 100000, 1, 0, 0, &h), QDF_OK);
  EXPECT_EQ(h.g2_zero, 0);
  EXPECT_EQ(qdf_simulate_hbt(&m, 10, 1, 0, 0, &h), QDF_ERR_INVALID_PARAMETER);
  qdf_source_model out;
  qdf_calibration_report r;
  EXPECT_EQ(qdf_calibrate(0.95, 0.6, 0.9, &m, &out, &r), QDF_ERR_UNREACHABLE);
  EXPECT_NE(std::string(qdf_last_error()).find("bound"), std::string::npos);
}
