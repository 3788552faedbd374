// Copyright 2026 The qamut Authors
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

// Local QUBO samplers: exhaustive enumeration, simulated annealing, a
// bit-string genetic search and uniform random draws.

#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "qamut/error.hpp"
#include "qamut/qubo.hpp"
#include "qamut/random.hpp"

namespace qamut {

struct Sample {
  Selection selection;
  double energy = 0.0;
  std::size_t occurrences = 1;
};

struct SampleSet {
  std::vector<Sample> samples;  // ascending energy, then lexicographic bits
  std::string solver_name;
  double wall_time = 0.0;    // seconds
  double solver_time = 0.0;  // seconds spent inside the sampler proper

  const Sample& best() const {
    if (samples.empty()) throw Error("empty sample set");
    return samples.front();
  }
};

// Signature every sampler adapts to when plugged into the pipeline.
using Sampler = std::function<SampleSet(const Qubo&)>;

inline bool sample_before(const Sample& a, const Sample& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  return a.selection < b.selection;
}

// Merges duplicate selections, recomputes every energy from q and sorts.
inline SampleSet make_sample_set(const Qubo& q, std::vector<Selection> raw,
                                 std::string solver_name) {
  std::map<Selection, std::size_t> counts;
  for (Selection& s : raw) ++counts[std::move(s)];
  SampleSet set;
  set.solver_name = std::move(solver_name);
  set.samples.reserve(counts.size());
  for (auto& [sel, n] : counts) set.samples.push_back({sel, energy(q, sel), n});
  std::sort(set.samples.begin(), set.samples.end(), sample_before);
  return set;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Full symmetric coupling matrix for O(n) local-field updates.
class DenseCouplings {
 public:
  explicit DenseCouplings(const Qubo& q) : n_(q.size()), m_(n_ * n_, 0.0) {
    std::size_t p = 0;
    auto packed = q.packed_quadratic();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j, ++p) {
        m_[i * n_ + j] = packed[p];
        m_[j * n_ + i] = packed[p];
      }
  }
  const double* row(std::size_t i) const { return m_.data() + i * n_; }

 private:
  std::size_t n_;
  std::vector<double> m_;
};

// Local field f_i = linear_i + sum_j Q_ij x_j; flipping x_i changes the
// energy by +f_i (0 -> 1) or -f_i (1 -> 0).
inline std::vector<double> local_fields(const Qubo& q, const DenseCouplings& c,
                                        const std::vector<std::uint8_t>& x) {
  const std::size_t n = q.size();
  std::vector<double> f(q.linear_terms().begin(), q.linear_terms().end());
  for (std::size_t j = 0; j < n; ++j)
    if (x[j]) {
      const double* r = c.row(j);
      for (std::size_t i = 0; i < n; ++i) f[i] += r[i];
    }
  return f;
}

inline void flip(std::size_t i, std::vector<std::uint8_t>& x,
                 std::vector<double>& f, const DenseCouplings& c) {
  const double sign = x[i] ? -1.0 : 1.0;
  x[i] ^= 1;
  const double* r = c.row(i);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] += sign * r[j];
}

}  // namespace detail

inline constexpr std::size_t kMaxExactVariables = 24;

// Enumerates all 2^n assignments in Gray-code order. The result holds the
// lowest `frontier` assignments, best first, with exact energies.
inline SampleSet solve_exact(const Qubo& q, std::size_t frontier = 1000) {
  const std::size_t n = q.size();
  if (n > kMaxExactVariables)
    throw CapacityError("exhaustive solver handles at most " +
                        std::to_string(kMaxExactVariables) +
                        " variables, got " + std::to_string(n));
  const auto t0 = detail::Clock::now();

  // Lexicographic rank of an assignment: x_0 is the most significant bit.
  auto lex_key = [n](std::uint32_t mask) {
    std::uint32_t key = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) key |= 1u << (n - 1 - i);
    return key;
  };
  using Entry = std::pair<double, std::uint32_t>;  // (energy, lex key)
  std::priority_queue<Entry> heap;                  // worst on top
  auto offer = [&](double e, std::uint32_t mask) {
    Entry cand{e, lex_key(mask)};
    if (heap.size() < frontier) {
      heap.push(cand);
    } else if (cand < heap.top()) {
      heap.pop();
      heap.push(cand);
    }
  };

  const detail::DenseCouplings c(q);
  std::vector<std::uint8_t> x(n, 0);
  std::vector<double> f = detail::local_fields(q, c, x);
  double e = q.offset();
  std::uint32_t mask = 0;
  offer(e, mask);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t t = 1; t < total; ++t) {
    const auto i = static_cast<std::size_t>(std::countr_zero(t));
    e += x[i] ? -f[i] : f[i];
    detail::flip(i, x, f, c);
    mask ^= 1u << i;
    offer(e, mask);
  }

  std::vector<Selection> raw;
  raw.reserve(heap.size());
  while (!heap.empty()) {
    std::uint32_t key = heap.top().second;
    heap.pop();
    Selection s(n);
    for (std::size_t i = 0; i < n; ++i) s.bits[i] = key >> (n - 1 - i) & 1u;
    raw.push_back(std::move(s));
  }
  const double solve = detail::seconds_since(t0);
  SampleSet set = make_sample_set(q, std::move(raw), "exact");
  set.solver_time = solve;
  set.wall_time = detail::seconds_since(t0);
  return set;
}

struct AnnealParams {
  std::size_t num_reads = 100;
  std::size_t sweeps = 1000;
  double initial_temperature = 10.0;
  double final_temperature = 0.05;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_reads < 1) throw ConfigurationError("num_reads must be >= 1");
    if (sweeps < 1) throw ConfigurationError("sweeps must be >= 1");
    if (!(final_temperature > 0.0) ||
        !(initial_temperature > final_temperature))
      throw ConfigurationError(
          "need initial_temperature > final_temperature > 0");
  }
};

// Energy scale the annealing temperatures are expressed in: the largest
// linear bias magnitude, falling back to the largest coupling.
inline double anneal_scale(const Qubo& q) {
  double s = 0.0;
  for (double v : q.linear_terms()) s = std::max(s, std::abs(v));
  if (s == 0.0)
    for (double v : q.packed_quadratic()) s = std::max(s, std::abs(v));
  return s == 0.0 ? 1.0 : s;
}

// num_reads independent restarts from uniform random states, each running
// `sweeps` in-order passes of single-bit Metropolis moves while the
// temperature cools geometrically from initial to final.
inline SampleSet solve_sa(const Qubo& q, const AnnealParams& p) {
  p.validate();
  const auto t0 = detail::Clock::now();
  const std::size_t n = q.size();
  const detail::DenseCouplings c(q);
  const double scale = anneal_scale(q);
  const double t_hot = p.initial_temperature * scale;
  const double ratio = p.final_temperature / p.initial_temperature;

  std::vector<Selection> raw;
  raw.reserve(p.num_reads);
  for (std::size_t r = 0; r < p.num_reads; ++r) {
    Rng rng(derive_seed(p.seed, {r}));
    std::vector<std::uint8_t> x(n);
    for (auto& b : x) b = rng.bernoulli(0.5);
    std::vector<double> f = detail::local_fields(q, c, x);
    for (std::size_t s = 0; s < p.sweeps; ++s) {
      const double frac =
          p.sweeps == 1 ? 1.0
                        : static_cast<double>(s) /
                              static_cast<double>(p.sweeps - 1);
      const double temp = t_hot * std::pow(ratio, frac);
      for (std::size_t i = 0; i < n; ++i) {
        const double delta = x[i] ? -f[i] : f[i];
        bool accept = delta <= 0.0;
        if (!accept) {
          const double z = delta / temp;
          accept = z < 40.0 && rng.uniform() < std::exp(-z);
        }
        if (accept) detail::flip(i, x, f, c);
      }
    }
    raw.emplace_back(std::move(x));
  }
  const double solve = detail::seconds_since(t0);
  SampleSet set = make_sample_set(q, std::move(raw), "simulated_annealing");
  set.solver_time = solve;
  set.wall_time = detail::seconds_since(t0);
  return set;
}

// Generational genetic search with binary tournaments, uniform crossover,
// per-bit mutation rate 1/n and single-individual elitism. Initial
// individuals are Bernoulli(rho) strings with rho drawn uniformly per
// individual, so the first generation spans sparse to dense selections.
inline SampleSet solve_evolutionary(const Qubo& q, std::size_t pop,
                                    std::size_t generations, Rng& rng) {
  if (pop < 2) throw ConfigurationError("population must be >= 2");
  const auto t0 = detail::Clock::now();
  const std::size_t n = q.size();
  const double mutation = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);

  struct Individual {
    Selection genes;
    double energy;
  };
  std::vector<Individual> population;
  population.reserve(pop);
  for (std::size_t k = 0; k < pop; ++k) {
    Selection s(n);
    const double rho = rng.uniform();
    for (auto& b : s.bits) b = rng.bernoulli(rho);
    double e = energy(q, s);
    population.push_back({std::move(s), e});
  }
  auto better = [](const Individual& a, const Individual& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.genes < b.genes;
  };
  auto tournament = [&]() -> const Individual& {
    const auto& a = population[rng.uniform_int(0, pop - 1)];
    const auto& b = population[rng.uniform_int(0, pop - 1)];
    return better(a, b) ? a : b;
  };

  for (std::size_t g = 0; g < generations; ++g) {
    std::vector<Individual> next;
    next.reserve(pop);
    next.push_back(*std::min_element(population.begin(), population.end(),
                                     better));
    while (next.size() < pop) {
      const Individual& ma = tournament();
      const Individual& pa = tournament();
      Selection child(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t bit = rng.bernoulli(0.5) ? ma.genes.bits[i]
                                              : pa.genes.bits[i];
        if (rng.bernoulli(mutation)) bit ^= 1;
        child.bits[i] = bit;
      }
      double e = energy(q, child);
      next.push_back({std::move(child), e});
    }
    population = std::move(next);
  }

  std::vector<Selection> raw;
  raw.reserve(pop);
  for (auto& ind : population) raw.push_back(std::move(ind.genes));
  const double solve = detail::seconds_since(t0);
  SampleSet set = make_sample_set(q, std::move(raw), "evolutionary");
  set.solver_time = solve;
  set.wall_time = detail::seconds_since(t0);
  return set;
}

// `draws` independent uniform assignments, best first.
inline SampleSet solve_random(const Qubo& q, std::size_t draws, Rng& rng) {
  if (draws < 1) throw ConfigurationError("draws must be >= 1");
  const auto t0 = detail::Clock::now();
  std::vector<Selection> raw;
  raw.reserve(draws);
  for (std::size_t d = 0; d < draws; ++d) {
    Selection s(q.size());
    for (auto& b : s.bits) b = rng.bernoulli(0.5);
    raw.push_back(std::move(s));
  }
  SampleSet set = make_sample_set(q, std::move(raw), "random");
  set.solver_time = detail::seconds_since(t0);
  set.wall_time = set.solver_time;
  return set;
}

}  // namespace qamut
