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

#include "lattice_sampler.hpp"

#include <boost/math/distributions/normal.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>
#include <vector>

namespace qdfusion::detail {

std::uint64_t splitmix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a * 0xd1b54a32d192ed03ULL);
  h = splitmix64(s);
  s = h ^ (b * 0x8cb92ba72f3d8dd7ULL);
  return splitmix64(s);
}

int korobov_generator(int n, int dim) {
  if (n <= 2 || dim <= 1) return 1;
  auto b2 = [](double x) { return x * x - x + 1.0 / 6.0; };
  const double c = 2.0 * std::numbers::pi * std::numbers::pi;
  int best = 1;
  double best_p2 = 1e300;
  for (int a = 1; a <= n / 2; ++a) {
    if (std::gcd(a, n) != 1) continue;
    std::vector<long long> z(dim);
    long long g = 1;
    for (int d = 0; d < dim; ++d) {
      z[d] = g;
      g = (g * a) % n;
    }
    double p2 = 0.0;
    for (int k = 0; k < n; ++k) {
      double prod = 1.0;
      for (int d = 0; d < dim; ++d)
        prod *= 1.0 + c * b2(double((k * z[d]) % n) / n);
      p2 += prod;
    }
    p2 = p2 / n - 1.0;
    if (p2 < best_p2) {
      best_p2 = p2;
      best = a;
    }
  }
  return best;
}

Eigen::MatrixXd normal_lattice(int n, int dim, std::uint64_t seed) {
  Eigen::MatrixXd z(n, dim);
  if (n <= 0 || dim <= 0) return z;
  const int a = korobov_generator(n, dim);
  std::mt19937_64 rng(derive_seed(seed, 0x1a77, dim));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> shift(dim);
  for (double &s : shift) s = uni(rng);
  const boost::math::normal normal;
  long long g = 1;
  for (int d = 0; d < dim; ++d) {
    for (int k = 0; k < n; ++k) {
      double u = double((k * g) % n) / n + shift[d];
      u -= std::floor(u);
      if (u <= 0.0) u = 0.5 / n;
      z(k, d) = boost::math::quantile(normal, u);
    }
    g = (g * a) % n;
  }
  return z;
}

Eigen::MatrixXd helmert_contrasts(int m) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(std::max(m - 1, 0), m);
  for (int j = 1; j < m; ++j) {
    const double s = 1.0 / std::sqrt(double(j) * (j + 1));
    for (int i = 0; i < j; ++i) h(j - 1, i) = s;
    h(j - 1, j) = -j * s;
  }
  return h;
}

std::vector<std::uint64_t> multinomial(std::uint64_t n,
                                       const std::vector<double> &p,
                                       std::mt19937_64 &rng) {
  std::vector<std::uint64_t> out(p.size(), 0);
  double rest = 0.0;
  for (double x : p) rest += std::max(x, 0.0);
  std::uint64_t left = n;
  for (std::size_t i = 0; i < p.size() && left > 0; ++i) {
    const double pi = std::max(p[i], 0.0);
    if (i + 1 == p.size() || pi >= rest) {
      out[i] = left;
      left = 0;
      break;
    }
    if (pi > 0) {
      std::binomial_distribution<std::uint64_t> bin(left, pi / rest);
      out[i] = bin(rng);
      left -= out[i];
    }
    rest -= pi;
  }
  return out;
}

void parallel_for(int n, int workers, const std::function<void(int)> &fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += workers) fn(i);
    });
  for (auto &th : pool) th.join();
}

}  // namespace qdfusion::detail
