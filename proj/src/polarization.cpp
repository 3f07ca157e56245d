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

#include "qdfusion/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

namespace qdfusion {

using Complex = std::complex<double>;

namespace {

int qubits_for_dim(Eigen::Index dim) {
  for (int n = 1; n <= kMaxQubits; ++n)
    if (Eigen::Index(1) << n == dim) return n;
  return -1;
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd &m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace

PolarizationState PolarizationState::from_matrix(const Eigen::MatrixXcd &rho,
                                                 double eig_tol) {
  require(rho.rows() == rho.cols(), ErrorCode::DimensionMismatch,
          "density matrix must be square");
  const int n = qubits_for_dim(rho.rows());
  require(n > 0, ErrorCode::DimensionMismatch,
          "density matrix dimension must be 2^N with 1 <= N <= 6");
  require(rho.allFinite(), ErrorCode::InvalidData,
          "density matrix has non-finite entries");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  require(herm <= 1e-10, ErrorCode::InvalidData,
          "density matrix is not Hermitian");
  const double tr = rho.trace().real();
  require(std::abs(tr - 1.0) <= 1e-10, ErrorCode::InvalidData,
          "density matrix trace differs from one");
  Eigen::MatrixXcd h = hermitian_part(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -eig_tol) {
    std::ostringstream msg;
    msg << "density matrix has eigenvalue " << es.eigenvalues().minCoeff();
    throw Error(ErrorCode::InvalidData, msg.str());
  }
  return PolarizationState(n, std::move(h));
}

PolarizationState PolarizationState::from_vector(const Eigen::VectorXcd &psi) {
  const double norm = psi.norm();
  require(norm > 0 && std::isfinite(norm), ErrorCode::InvalidData,
          "state vector has zero norm");
  const Eigen::VectorXcd v = psi / norm;
  return from_matrix(v * v.adjoint());
}

double PolarizationState::purity() const { return rho_.squaredNorm(); }

Observable Observable::from_matrix(const Eigen::MatrixXcd &m) {
  require(m.rows() == m.cols() && qubits_for_dim(m.rows()) > 0,
          ErrorCode::DimensionMismatch, "observable must be 2^N square");
  require((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12,
          ErrorCode::InvalidData, "observable is not Hermitian");
  return Observable{m};
}

Observable m_theta(double theta) {
  Eigen::Matrix2cd m;
  m << 0.0, std::polar(1.0, -theta), std::polar(1.0, theta), 0.0;
  return Observable{m};
}

Observable pauli_x() { return m_theta(0.0); }

Observable pauli_y() {
  Eigen::Matrix2cd m;
  m << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  return Observable{m};
}

Observable pauli_z() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return Observable{m};
}

Eigen::Vector2cd polarization_ket(char label) {
  const double s = std::numbers::sqrt2 / 2.0;
  switch (label) {
    case 'H': return {1.0, 0.0};
    case 'V': return {0.0, 1.0};
    case 'D': return {s, s};
    case 'A': return {s, -s};
    case 'R': return {s, Complex(0, -s)};
    case 'L': return {s, Complex(0, s)};
    default: break;
  }
  throw Error(ErrorCode::InvalidParameter,
              std::string("unknown polarization label '") + label + "'");
}

PolarizationState ghz_pure(int n, double phi) {
  require(n >= 2 && n <= kMaxQubits, ErrorCode::InvalidParameter,
          "GHZ size must be between 2 and 6");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  v[0] = std::numbers::sqrt2 / 2.0;
  v[v.size() - 1] = std::polar(std::numbers::sqrt2 / 2.0, phi);
  return PolarizationState::from_matrix(v * v.adjoint());
}

PolarizationState ghz_from_decomposition(int n, double phi) {
  require(n >= 2 && n <= kMaxQubits, ErrorCode::InvalidParameter,
          "GHZ size must be between 2 and 6");
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 0.5;
  rho(dim - 1, dim - 1) = 0.5;
  for (int i = 0; i < n; ++i) {
    const double theta = (i * std::numbers::pi + phi) / n;
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    rho += (sign / (2.0 * n)) * tensor_power(m_theta(theta), n).matrix;
  }
  return PolarizationState::from_matrix(rho);
}

PolarizationState maximally_mixed(int n) {
  require(n >= 1 && n <= kMaxQubits, ErrorCode::InvalidParameter,
          "qubit count must be between 1 and 6");
  const Eigen::Index dim = Eigen::Index(1) << n;
  return PolarizationState::from_matrix(
      Eigen::MatrixXcd::Identity(dim, dim) / double(dim));
}

PolarizationState product_state(std::string_view labels) {
  require(!labels.empty() && labels.size() <= kMaxQubits,
          ErrorCode::InvalidParameter, "product state needs 1..6 labels");
  Eigen::VectorXcd v = polarization_ket(labels[0]);
  for (std::size_t q = 1; q < labels.size(); ++q) {
    const Eigen::VectorXcd k = polarization_ket(labels[q]);
    Eigen::VectorXcd w = Eigen::kroneckerProduct(v, k);
    v = w;
  }
  return PolarizationState::from_vector(v);
}

double expectation(const PolarizationState &s,
                   const std::vector<Observable> &per_qubit) {
  require(static_cast<int>(per_qubit.size()) == s.n_qubits(),
          ErrorCode::DimensionMismatch,
          "one observable per qubit is required");
  Eigen::MatrixXcd full = per_qubit[0].matrix;
  for (std::size_t q = 1; q < per_qubit.size(); ++q) {
    require(per_qubit[q].matrix.rows() == 2, ErrorCode::DimensionMismatch,
            "per-qubit observables must be 2x2");
    full = tensor(full, per_qubit[q].matrix);
  }
  return expectation(s, Observable{full});
}

double expectation(const PolarizationState &s, const Observable &full) {
  require(full.matrix.rows() == s.dim() && full.matrix.cols() == s.dim(),
          ErrorCode::DimensionMismatch,
          "observable dimension does not match the state");
  return (s.matrix() * full.matrix).trace().real();
}

Eigen::MatrixXcd tensor(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

PolarizationState tensor(const PolarizationState &a,
                         const PolarizationState &b) {
  require(a.n_qubits() + b.n_qubits() <= kMaxQubits,
          ErrorCode::DimensionMismatch, "tensor product exceeds 6 qubits");
  return PolarizationState::from_matrix(tensor(a.matrix(), b.matrix()));
}

Observable tensor_power(const Observable &o, int n) {
  require(n >= 1, ErrorCode::InvalidParameter, "tensor power needs n >= 1");
  Eigen::MatrixXcd m = o.matrix;
  for (int i = 1; i < n; ++i) m = tensor(m, o.matrix);
  return Observable{m};
}

PolarizationState partial_trace(const PolarizationState &s,
                                const std::vector<int> &traced) {
  const int n = s.n_qubits();
  std::vector<bool> gone(n, false);
  for (int q : traced) {
    require(q >= 0 && q < n && !gone[q], ErrorCode::DimensionMismatch,
            "invalid or repeated qubit in partial trace");
    gone[q] = true;
  }
  std::vector<int> keep, drop;
  for (int q = 0; q < n; ++q) (gone[q] ? drop : keep).push_back(q);
  require(!keep.empty(), ErrorCode::DimensionMismatch,
          "partial trace must keep at least one qubit");
  auto compose = [n](const std::vector<int> &qs, int sub, int base) {
    const int k = static_cast<int>(qs.size());
    for (int i = 0; i < k; ++i)
      if ((sub >> (k - 1 - i)) & 1) base |= 1 << (n - 1 - qs[i]);
    return base;
  };
  const int dk = 1 << keep.size(), dd = 1 << drop.size();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dk, dk);
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b)
      for (int e = 0; e < dd; ++e)
        r(a, b) += s(compose(keep, a, compose(drop, e, 0)),
                     compose(keep, b, compose(drop, e, 0)));
  return PolarizationState::from_matrix(hermitian_part(r));
}

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd &m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(m));
  // Eigenvalues at rounding level would otherwise enter as sqrt(eps).
  const double floor = 64 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd w = es.eigenvalues();
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w[i] = w[i] > floor ? std::sqrt(w[i]) : 0.0;
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd &m) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
}

}  // namespace

double fidelity(const PolarizationState &a, const PolarizationState &b) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch,
          "fidelity needs states of equal dimension");
  // Trace norm of sqrt(a) sqrt(b), squared.
  const double root =
      singular_values(psd_sqrt(a.matrix()) * psd_sqrt(b.matrix())).sum();
  return std::clamp(root * root, 0.0, 1.0);
}

double concurrence(const PolarizationState &s) {
  require(s.n_qubits() == 2, ErrorCode::DimensionMismatch,
          "concurrence is defined for two qubits");
  const Eigen::MatrixXcd yy = tensor(pauli_y().matrix, pauli_y().matrix);
  const Eigen::MatrixXcd sr = psd_sqrt(s.matrix());
  // sqrt of the spin-flipped state is the spin flip of sqrt(rho).
  const Eigen::MatrixXcd st = yy * sr.conjugate() * yy;
  Eigen::VectorXd l = singular_values(sr * st);
  std::sort(l.data(), l.data() + l.size(), std::greater<double>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Eigen::MatrixXcd project_to_physical(const Eigen::MatrixXcd &m) {
  Eigen::MatrixXcd h = hermitian_part(m);
  const double tr = h.trace().real();
  require(tr > 0 && std::isfinite(tr), ErrorCode::InvalidData,
          "matrix has non-positive trace");
  h /= tr;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  // Euclidean projection of the spectrum onto the probability simplex.
  std::vector<double> w(es.eigenvalues().data(),
                        es.eigenvalues().data() + es.eigenvalues().size());
  std::vector<double> u = w;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, shift = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / double(j + 1);
    if (u[j] - t > 0) shift = t;
  }
  Eigen::VectorXd p(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) p[j] = std::max(0.0, w[j] - shift);
  Eigen::MatrixXcd r =
      es.eigenvectors() * p.asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(r / r.trace().real());
}

PolarizationState clip_to_physical(const Eigen::MatrixXcd &m) {
  return PolarizationState::from_matrix(project_to_physical(m));
}

PolarizationState apply_local(const PolarizationState &s, int qubit,
                              const Eigen::Matrix2cd &u) {
  const int n = s.n_qubits();
  require(qubit >= 0 && qubit < n, ErrorCode::DimensionMismatch,
          "qubit index out of range");
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < n; ++q)
    full = tensor(full, q == qubit ? Eigen::MatrixXcd(u)
                                   : Eigen::MatrixXcd::Identity(2, 2));
  return PolarizationState::from_matrix(
      hermitian_part(full * s.matrix() * full.adjoint()));
}

}  // namespace qdfusion
