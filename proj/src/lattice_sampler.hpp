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
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace qdfusion::detail {

std::uint64_t splitmix64(std::uint64_t &state);
// Independent stream seed for (seed, a, b).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0);

// Korobov rank-1 lattice with a seeded random shift, pushed through the
// inverse normal CDF. Row i is one standard-normal point in `dim` dims.
Eigen::MatrixXd normal_lattice(int n, int dim, std::uint64_t seed);

// Korobov generator minimizing the P2 figure of merit.
int korobov_generator(int n, int dim);

// (m-1) x m orthonormal contrasts, each row orthogonal to (1, ..., 1).
Eigen::MatrixXd helmert_contrasts(int m);

// Sequential-binomial multinomial draw; p need not be normalized.
std::vector<std::uint64_t> multinomial(std::uint64_t n,
                                       const std::vector<double> &p,
                                       std::mt19937_64 &rng);

// Runs fn(i) for i in [0, n) on up to `workers` threads. Callers write to
// per-index slots, so results do not depend on the worker count.
void parallel_for(int n, int workers, const std::function<void(int)> &fn);

}  // namespace qdfusion::detail
