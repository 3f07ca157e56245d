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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string_view>
#include <vector>

#include "qdfusion/error.hpp"

namespace qdfusion {

inline constexpr int kMaxQubits = 6;

// Qubit 0 is the most significant bit of the basis index; |H> = 0, |V> = 1.
class PolarizationState {
 public:
  // Checks Hermiticity and trace (1e-10) and the smallest eigenvalue
  // against -eig_tol.
  static PolarizationState from_matrix(const Eigen::MatrixXcd &rho,
                                       double eig_tol = 1e-8);
  static PolarizationState from_vector(const Eigen::VectorXcd &psi);

  int n_qubits() const { return n_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXcd &matrix() const { return rho_; }
  std::complex<double> operator()(int r, int c) const { return rho_(r, c); }
  double purity() const;

 private:
  PolarizationState(int n, Eigen::MatrixXcd rho) : n_(n), rho_(std::move(rho)) {}
  int n_;
  Eigen::MatrixXcd rho_;
};

struct Observable {
  Eigen::MatrixXcd matrix;
  static Observable from_matrix(const Eigen::MatrixXcd &m);
};

Observable m_theta(double theta);
Observable pauli_x();
Observable pauli_y();
Observable pauli_z();

// Single-qubit kets for the labels H, V, D, A, R, L.
Eigen::Vector2cd polarization_ket(char label);

PolarizationState ghz_pure(int n, double phi);
// Population term plus the alternating sum of M((i pi + phi)/N)^{(x)N}.
PolarizationState ghz_from_decomposition(int n, double phi);
PolarizationState maximally_mixed(int n);
// Product of single-qubit label states, e.g. "HV" or "DR".
PolarizationState product_state(std::string_view labels);

double expectation(const PolarizationState &s,
                   const std::vector<Observable> &per_qubit);
double expectation(const PolarizationState &s, const Observable &full);

Eigen::MatrixXcd tensor(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);
PolarizationState tensor(const PolarizationState &a, const PolarizationState &b);
Observable tensor_power(const Observable &o, int n);
PolarizationState partial_trace(const PolarizationState &s,
                                const std::vector<int> &traced);

// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const PolarizationState &a, const PolarizationState &b);
double concurrence(const PolarizationState &s);

// Closest unit-trace positive semidefinite matrix in Frobenius norm.
Eigen::MatrixXcd project_to_physical(const Eigen::MatrixXcd &m);
PolarizationState clip_to_physical(const Eigen::MatrixXcd &m);

// Applies a local unitary to one qubit.
PolarizationState apply_local(const PolarizationState &s, int qubit,
                              const Eigen::Matrix2cd &u);

}  // namespace qdfusion
