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

// Post-selected polarization state of a PBS network fed with cascade pairs.
//
// Each surviving term places one photon per detector slot. The temporal
// overlap of two terms factorizes into cycles that alternate between XX and
// X slots; along a cycle the Schmidt sums collapse to a trace of products of
// diag(lambda) and Gram matrices G = U_b^dagger diag(exp(-i dw t)) U_a.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "lattice_sampler.hpp"
#include "qdfusion/fusion.hpp"

namespace qdfusion {

namespace {

struct Photon {
  int pair;
  double detune;
};

struct Survivor {
  Complex coeff;
  int pattern;
  // slot[line][s]: which pair's photon sits in slot s and its detuning.
  std::array<std::vector<Photon>, 2> slot;
  // where[line][p]: slot of pair p's photon.
  std::array<std::vector<int>, 2> where;
};

struct Branch {
  double weight;
  std::vector<Survivor> survivors;
};

int qubit_of(Line line, int slot) {
  return 2 * slot + (line == Line::X ? 1 : 0);
}

std::vector<Branch> enumerate(const InterferenceNetwork &net,
                              const std::vector<const PairSource *> &src) {
  const int m = net.pairs;
  const int nq = 2 * net.slots;
  std::vector<Branch> out;
  std::vector<std::size_t> comp(m, 0);
  while (true) {
    Branch br{1.0, {}};
    for (int p = 0; p < m; ++p) br.weight *= src[p]->components[comp[p]].weight;
    std::vector<std::size_t> term(m, 0);
    while (true) {
      Survivor sv;
      sv.coeff = 1.0;
      sv.pattern = 0;
      bool ok = true;
      for (int l = 0; l < 2; ++l) {
        sv.slot[l].assign(net.slots, Photon{-1, 0.0});
        sv.where[l].assign(m, -1);
      }
      for (int p = 0; p < m && ok; ++p) {
        const PairTerm &t = src[p]->components[comp[p]].terms[term[p]];
        sv.coeff *= t.coeff;
        for (Line line : {Line::XX, Line::X}) {
          const Pol pol = line == Line::XX ? t.xx : t.x;
          const int s = net.route(p, line, pol);
          const int l = static_cast<int>(line);
          if (s < 0 || s >= net.slots || sv.slot[l][s].pair >= 0) {
            ok = false;
            break;
          }
          sv.slot[l][s] = {p, line == Line::XX ? t.detune_xx : t.detune_x};
          sv.where[l][p] = s;
          if (pol == Pol::V) sv.pattern |= 1 << (nq - 1 - qubit_of(line, s));
        }
      }
      if (ok) br.survivors.push_back(std::move(sv));
      int p = 0;
      for (; p < m; ++p) {
        if (++term[p] < src[p]->components[comp[p]].terms.size()) break;
        term[p] = 0;
      }
      if (p == m) break;
    }
    if (!br.survivors.empty() && br.weight > 0) out.push_back(std::move(br));
    int p = 0;
    for (; p < m; ++p) {
      if (++comp[p] < src[p]->components.size()) break;
      comp[p] = 0;
    }
    if (p == m) break;
  }
  return out;
}

class GramCache {
 public:
  GramCache(const std::vector<const PairSource *> &src, const TimeGrid &grid)
      : src_(src), grid_(grid) {}

  const Eigen::MatrixXcd &get(Line line, int pa, int pb, double dw) {
    const SchmidtDecomposition *a = src_[pa]->schmidt.get();
    const SchmidtDecomposition *b = src_[pb]->schmidt.get();
    auto key = std::make_tuple(static_cast<int>(line), a, b, dw);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, compute(line, *a, *b, dw)).first->second;
  }

 private:
  Eigen::MatrixXcd compute(Line line, const SchmidtDecomposition &a,
                           const SchmidtDecomposition &b, double dw) const {
    const Eigen::MatrixXcd &ua = line == Line::XX ? a.modes_xx : a.modes_x;
    const Eigen::MatrixXcd &ub = line == Line::XX ? b.modes_xx : b.modes_x;
    const int n = static_cast<int>(ua.rows());
    if (dw == 0.0 && &a == &b)
      return Eigen::MatrixXcd::Identity(ua.cols(), ua.cols());
    Eigen::VectorXd c(n), s(n);
    for (int i = 0; i < n; ++i) {
      c[i] = std::cos(dw * grid_.time(i));
      s[i] = std::sin(dw * grid_.time(i));
    }
    if (a.real && b.real) {
      const Eigen::MatrixXd ra = ua.real(), rb = ub.real();
      Eigen::MatrixXd gr = rb.transpose() * (c.asDiagonal() * ra);
      Eigen::MatrixXd gi = rb.transpose() * (s.asDiagonal() * ra);
      Eigen::MatrixXcd g(gr.rows(), gr.cols());
      g.real() = gr;
      g.imag() = -gi;
      return g;
    }
    Eigen::VectorXcd ph(n);
    for (int i = 0; i < n; ++i) ph[i] = Complex(c[i], -s[i]);
    return ub.adjoint() * (ph.asDiagonal() * ua);
  }

  const std::vector<const PairSource *> &src_;
  TimeGrid grid_;
  std::map<std::tuple<int, const SchmidtDecomposition *,
                      const SchmidtDecomposition *, double>,
           Eigen::MatrixXcd>
      cache_;
};

// <T'|T> for surviving terms t (ket) and u (bra); wander[line][pair] are the
// realization's extra detunings.
Complex overlap(const Survivor &t, const Survivor &u, int m,
                const std::array<std::vector<double>, 2> &wander,
                const std::vector<Eigen::VectorXd> &lambda, GramCache &gram,
                double path_overlap) {
  const int XX = 0, X = 1;
  std::vector<bool> seen(m, false);
  Complex total = 1.0;
  for (int p0 = 0; p0 < m; ++p0) {
    if (seen[p0]) continue;
    Eigen::MatrixXcd acc = lambda[p0].cast<Complex>().asDiagonal();
    int p = p0;
    while (true) {
      seen[p] = true;
      const int s = t.where[XX][p];
      const int q = u.slot[XX][s].pair;
      const double dw = (t.slot[XX][s].detune + wander[XX][p]) -
                        (u.slot[XX][s].detune + wander[XX][q]);
      acc = acc * gram.get(Line::XX, p, q, dw).transpose();
      acc = acc * lambda[q].cast<Complex>().asDiagonal();
      if (p != q) acc *= path_overlap;
      const int s2 = u.where[X][q];
      const int r = t.slot[X][s2].pair;
      const double dw2 = (t.slot[X][s2].detune + wander[X][r]) -
                         (u.slot[X][s2].detune + wander[X][q]);
      acc = acc * gram.get(Line::X, r, q, dw2);
      if (r != q) acc *= path_overlap;
      if (r == p0) {
        total *= acc.trace();
        break;
      }
      acc = acc * lambda[r].cast<Complex>().asDiagonal();
      p = r;
    }
  }
  return total;
}

Eigen::MatrixXcd accumulate(const Branch &br, int m, int dim,
                            const std::array<std::vector<double>, 2> &wander,
                            const std::vector<Eigen::VectorXd> &lambda,
                            GramCache &gram, double path_overlap) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  const auto &sv = br.survivors;
  for (std::size_t a = 0; a < sv.size(); ++a) {
    for (std::size_t b = a; b < sv.size(); ++b) {
      Complex ov = overlap(sv[a], sv[b], m, wander, lambda, gram, path_overlap);
      Complex v = br.weight * sv[a].coeff * std::conj(sv[b].coeff) * ov;
      if (a == b) {
        rho(sv[a].pattern, sv[a].pattern) += v.real();
      } else {
        rho(sv[a].pattern, sv[b].pattern) += v;
        rho(sv[b].pattern, sv[a].pattern) += std::conj(v);
      }
    }
  }
  return rho;
}

}  // namespace

NetworkResult run_network(const InterferenceNetwork &net,
                          const std::vector<const PairSource *> &sources,
                          const FusionConfig &config) {
  config.validate();
  const int m = net.pairs;
  require(m >= 1 && static_cast<int>(sources.size()) == m,
          ErrorCode::DimensionMismatch, "network needs one source per pair");
  require(net.slots >= 1 && 2 * net.slots <= kMaxQubits,
          ErrorCode::InvalidParameter, "network output exceeds 6 qubits");
  require(static_cast<bool>(net.route), ErrorCode::InvalidParameter,
          "network without routing");
  NetworkResult res;
  res.modes = 1 << 30;
  std::vector<Eigen::VectorXd> lambda(m);
  for (int p = 0; p < m; ++p) {
    const PairSource *s = sources[p];
    require(s != nullptr && s->schmidt != nullptr, ErrorCode::InvalidParameter,
            "pair source without Schmidt decomposition");
    require(!s->components.empty(), ErrorCode::InvalidParameter,
            "pair source without components");
    const SchmidtDecomposition &d = *s->schmidt;
    if (d.residual > config.max_residual) {
      std::ostringstream msg;
      msg << "Schmidt truncation residual " << d.residual
          << " exceeds the limit " << config.max_residual;
      throw Error(ErrorCode::Truncation, msg.str());
    }
    require(d.modes_xx.rows() == sources[0]->schmidt->modes_xx.rows() &&
                d.grid.t_max == sources[0]->schmidt->grid.t_max,
            ErrorCode::DimensionMismatch, "pairs live on different grids");
    res.residual = std::max(res.residual, d.residual);
    res.modes = std::min(res.modes, d.size());
    lambda[p] = d.coefficients / d.coefficients.norm();
  }
  const TimeGrid grid = sources[0]->schmidt->grid;
  const int dim = 1 << (2 * net.slots);
  const std::vector<Branch> branches = enumerate(net, sources);

  // Branches with a single surviving term have no cross terms, and their
  // diagonal overlap is one whatever the detunings.
  std::array<std::vector<double>, 2> still;
  still[0].assign(m, 0.0);
  still[1].assign(m, 0.0);
  res.rho = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<const Branch *> coherent;
  {
    GramCache gram(sources, grid);
    for (const Branch &br : branches) {
      if (br.survivors.size() > 1 && config.wandering.active())
        coherent.push_back(&br);
      else
        res.rho += accumulate(br, m, dim, still, lambda, gram,
                              config.path_overlap);
    }
  }
  if (coherent.empty()) return res;

  // Only contrasts between pairs on one line matter; a common shift cancels.
  const Wandering &w = config.wandering;
  const bool correlated = w.mode == Wandering::Mode::Correlated;
  const int k = m - 1;
  const int n = config.detuning_samples;
  const Eigen::MatrixXd helm = detail::helmert_contrasts(m);
  const Eigen::MatrixXd z =
      detail::normal_lattice(n, correlated ? k : 2 * k, config.seed);
  const double scale[2] = {ueV_to_omega(w.sigma_xx), ueV_to_omega(w.sigma_x)};

  std::vector<Eigen::MatrixXcd> partial(n);
  auto run_sample = [&](int s) {
    std::array<std::vector<double>, 2> wander;
    for (int l = 0; l < 2; ++l) {
      wander[l].assign(m, 0.0);
      const int off = correlated ? 0 : l * k;
      for (int p = 0; p < m; ++p)
        for (int j = 0; j < k; ++j)
          wander[l][p] += scale[l] * helm(j, p) * z(s, off + j);
    }
    GramCache gram(sources, grid);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const Branch *br : coherent)
      rho += accumulate(*br, m, dim, wander, lambda, gram, config.path_overlap);
    partial[s] = std::move(rho);
  };
  detail::parallel_for(n, config.workers, run_sample);
  // Fixed summation order keeps the result independent of the worker count.
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &r : partial) avg += r;
  res.rho += avg / n;
  return res;
}

}  // namespace qdfusion
