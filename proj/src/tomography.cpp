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
#include <set>
#include <sstream>

#include "qdfusion/metrics.hpp"

namespace qdfusion {

namespace {

bool valid_label(const std::string &l) {
  static const std::string kLetters = "HVDARL";
  return l.size() == 2 && kLetters.find(l[0]) != std::string::npos &&
         kLetters.find(l[1]) != std::string::npos;
}

Eigen::Vector4d bloch(char label) {
  const Eigen::Vector2cd k = polarization_ket(label);
  const Eigen::Matrix2cd p = k * k.adjoint();
  return {1.0, 2 * p(0, 1).real(), -2 * p(0, 1).imag(),
          (p(0, 0) - p(1, 1)).real()};
}

Eigen::Matrix2cd pauli(int i) {
  switch (i) {
    case 1: return pauli_x().matrix;
    case 2: return pauli_y().matrix;
    case 3: return pauli_z().matrix;
    default: return Eigen::Matrix2cd::Identity();
  }
}

}  // namespace

void TomographyRecord::validate() const {
  require(!settings.empty(), ErrorCode::InvalidData, "empty tomography record");
  require(settings.size() == counts.size(), ErrorCode::DimensionMismatch,
          "tomography settings and counts differ in length");
  for (std::size_t i = 0; i < settings.size(); ++i) {
    require(valid_label(settings[i]), ErrorCode::InvalidData,
            "invalid tomography setting '" + settings[i] + "'");
    require(counts[i] >= 0, ErrorCode::InvalidData,
            "negative count for setting " + settings[i]);
  }
}

std::vector<std::string> standard_settings() {
  return {"HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
          "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"};
}

std::vector<std::string> overcomplete_settings() {
  std::vector<std::string> out;
  for (char a : std::string("HVDARL"))
    for (char b : std::string("HVDARL")) out.push_back({a, b});
  return out;
}

Eigen::Matrix4cd setting_projector(const std::string &label) {
  require(valid_label(label), ErrorCode::InvalidData,
          "invalid tomography setting '" + label + "'");
  const Eigen::Vector2cd a = polarization_ket(label[0]);
  const Eigen::Vector2cd b = polarization_ket(label[1]);
  Eigen::Vector4cd v;
  v << a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1];
  return v * v.adjoint();
}

PolarizationState tomography_reconstruct(const TomographyRecord &record,
                                         const TomographyOptions &options) {
  record.validate();
  const std::size_t m = record.settings.size();
  // Unnormalized state N rho = (1/4) sum r_ij sigma_i (x) sigma_j.
  Eigen::MatrixXd design(m, 16);
  Eigen::VectorXd y(m);
  double total = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const Eigen::Vector4d a = bloch(record.settings[k][0]);
    const Eigen::Vector4d b = bloch(record.settings[k][1]);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) design(k, 4 * i + j) = 0.25 * a[i] * b[j];
    y[k] = double(record.counts[k]);
    total += y[k];
  }
  require(total > 0, ErrorCode::InvalidData, "all tomography counts are zero");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 16) {
    std::set<std::string> have(record.settings.begin(), record.settings.end());
    std::ostringstream msg;
    msg << "tomography settings are not informationally complete; missing:";
    for (const auto &s : standard_settings())
      if (!have.count(s)) msg << ' ' << s;
    throw Error(ErrorCode::InvalidData, msg.str());
  }
  const Eigen::VectorXd r = qr.solve(y);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rho += 0.25 * r[4 * i + j] * tensor(pauli(i), pauli(j));
  const double tr = rho.trace().real();
  require(tr > 0, ErrorCode::InvalidData,
          "tomography counts imply a non-positive trace");
  rho = project_to_physical(rho / tr);
  if (!options.maximum_likelihood) return PolarizationState::from_matrix(rho);

  // R rho R iteration; G^-1 rescaling makes unbalanced projector sets
  // converge to the likelihood maximum.
  std::vector<Eigen::Matrix4cd> proj(m);
  Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
  for (std::size_t k = 0; k < m; ++k) {
    proj[k] = setting_projector(record.settings[k]);
    g += proj[k];
  }
  const Eigen::Matrix4cd gi = g.inverse();
  rho = 0.99 * rho + 0.0025 * Eigen::MatrixXcd::Identity(4, 4);
  for (int it = 0; it < options.max_iterations; ++it) {
    std::vector<double> p(m);
    double psum = 0;
    for (std::size_t k = 0; k < m; ++k) {
      p[k] = std::max(proj[k].cwiseProduct(rho.transpose()).sum().real(),
                      1e-300);
      psum += p[k];
    }
    const double n_est = total / psum;
    Eigen::Matrix4cd rr = Eigen::Matrix4cd::Zero();
    for (std::size_t k = 0; k < m; ++k)
      if (y[k] > 0) rr += (y[k] / (n_est * p[k])) * proj[k];
    Eigen::MatrixXcd next = gi * rr * rho * rr * gi;
    next = 0.5 * (next + next.adjoint()).eval();
    next /= next.trace().real();
    const double change = (next - rho).cwiseAbs().maxCoeff();
    rho = next;
    if (change < options.tolerance) break;
  }
  return PolarizationState::from_matrix(rho);
}

}  // namespace qdfusion
