// Copyright 2026 The qbend Authors
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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qbend/errors.hpp"
#include "qbend/qubo.hpp"

namespace qbend {

enum class Backend { Exhaustive, SimulatedAnnealing };

/// One best sample from a backend. `energy` always equals
/// qubo_energy(Q, bits); callers are expected to recompute it on receipt.
/// best_rank counts distinct energies observed below this one (0 = best
/// found, which is all the single-best contract ever returns).
struct SampleResult {
  std::vector<int> bits;
  double energy = 0.0;
  long long reads = 0;
  int best_rank = 0;
};

/// Sampler knobs. The backend contract is synchronous
/// sample(Q, params) -> SampleResult; a network or hardware backed
/// implementation can slot in behind the same signature.
struct SamplerParams {
  Backend backend = Backend::Exhaustive;
  std::uint64_t seed = 0;
  int num_reads = 100;
  int sweeps = 2000;
  double beta_min = 0.01;
  double beta_max = 20.0;

  void validate() const {
    if (num_reads < 1) throw ConfigError("num_reads must be >= 1");
    if (sweeps < 1) throw ConfigError("sweeps must be >= 1");
    if (!(beta_min > 0) || !(beta_min < beta_max))
      throw ConfigError("need 0 < beta_min < beta_max");
  }
};

namespace detail {

// Local field f_j = Q_jj + 2 sum_{i != j} Q_ji z_i, so the energy delta of
// flipping bit j is (1 - 2 z_j) f_j.
inline std::vector<double> local_fields(const QuboMatrix& qubo,
                                        const std::vector<int>& z) {
  std::vector<double> f(qubo.size);
  for (int j = 0; j < qubo.size; ++j) {
    double v = qubo.q[j][j];
    for (int i = 0; i < qubo.size; ++i)
      if (i != j && z[i]) v += 2.0 * qubo.q[j][i];
    f[j] = v;
  }
  return f;
}

inline void apply_flip(const QuboMatrix& qubo, std::vector<int>& z,
                       std::vector<double>& f, double& energy, int j) {
  energy += (1 - 2 * z[j]) * f[j];
  z[j] ^= 1;
  const double sgn = z[j] ? 2.0 : -2.0;
  for (int i = 0; i < qubo.size; ++i)
    if (i != j) f[i] += sgn * qubo.q[i][j];
}

inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Exact oracle: enumerates all 2^N bitstrings in Gray-code order with
/// incremental energy updates. Ties go to the lexicographically smallest
/// bitstring. Guarded at N <= 24.
inline SampleResult solve_exhaustive(const QuboMatrix& qubo) {
  if (qubo.size > 24)
    throw TooLargeError("exhaustive enumeration limited to 24 bits");
  SampleResult result;
  if (qubo.size == 0) {
    result.energy = qubo.offset;
    result.reads = 1;
    return result;
  }

  std::vector<int> z(qubo.size, 0);
  std::vector<double> f = detail::local_fields(qubo, z);
  double energy = qubo.offset;
  std::vector<int> best = z;
  double best_energy = energy;

  const std::uint64_t total = 1ull << qubo.size;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int flip = __builtin_ctzll(k);
    detail::apply_flip(qubo, z, f, energy, flip);
    if (energy < best_energy ||
        (energy == best_energy && detail::lex_less(z, best))) {
      best_energy = energy;
      best = z;
    }
  }
  result.bits = std::move(best);
  result.energy = qubo_energy(qubo, result.bits);
  result.reads = static_cast<long long>(total);
  return result;
}

/// Simulated annealing: num_reads independent single-flip Metropolis chains
/// over a geometric inverse-temperature schedule beta_min -> beta_max with
/// `sweeps` full sweeps each. Fully deterministic: the PRNG stream of read r
/// is derived from (seed, r), so identical inputs give identical output and
/// reads could run in parallel without changing the result.
inline SampleResult solve_sa(const QuboMatrix& qubo,
                             const SamplerParams& params) {
  params.validate();
  SampleResult result;
  result.reads = params.num_reads;
  if (qubo.size == 0) {
    result.energy = qubo.offset;
    return result;
  }

  std::vector<int> best;
  double best_energy = 0.0;
  const double ratio = params.beta_max / params.beta_min;

  for (int read = 0; read < params.num_reads; ++read) {
    std::seed_seq seq{static_cast<std::uint32_t>(params.seed),
                      static_cast<std::uint32_t>(params.seed >> 32),
                      static_cast<std::uint32_t>(read)};
    std::mt19937_64 rng(seq);

    std::vector<int> z(qubo.size);
    for (int& bit : z) bit = static_cast<int>(rng() & 1u);
    std::vector<double> f = detail::local_fields(qubo, z);
    double energy = qubo_energy(qubo, z);
    std::vector<int> read_best = z;
    double read_best_energy = energy;

    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
      const double frac =
          params.sweeps > 1
              ? static_cast<double>(sweep) / (params.sweeps - 1)
              : 1.0;
      const double beta = params.beta_min * std::pow(ratio, frac);
      for (int j = 0; j < qubo.size; ++j) {
        const double delta = (1 - 2 * z[j]) * f[j];
        if (delta > 0.0 &&
            detail::uniform01(rng) >= std::exp(-beta * delta))
          continue;
        detail::apply_flip(qubo, z, f, energy, j);
        if (energy < read_best_energy) {
          read_best_energy = energy;
          read_best = z;
        }
      }
    }
    if (best.empty() || read_best_energy < best_energy ||
        (read_best_energy == best_energy &&
         detail::lex_less(read_best, best))) {
      best_energy = read_best_energy;
      best = std::move(read_best);
    }
  }
  result.bits = std::move(best);
  result.energy = qubo_energy(qubo, result.bits);
  return result;
}

/// Backend dispatch.
inline SampleResult sample(const QuboMatrix& qubo,
                           const SamplerParams& params) {
  if (params.backend == Backend::Exhaustive) return solve_exhaustive(qubo);
  return solve_sa(qubo, params);
}

}  // namespace qbend
