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

// Splits a whole-trajectory selection problem into sampled sub-problems that
// fit a small solver, then merges the sub-solutions with a final round.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qamut/error.hpp"
#include "qamut/metrics.hpp"
#include "qamut/qubo.hpp"
#include "qamut/random.hpp"
#include "qamut/samplers.hpp"

namespace qamut {

struct SubProblemPlan {
  std::size_t slice_index = 0;
  std::size_t lo = 0;  // window [lo, hi)
  std::size_t hi = 0;
  std::vector<std::size_t> sampled_indices;  // ascending, global

  friend bool operator==(const SubProblemPlan&,
                         const SubProblemPlan&) = default;
};

struct DecompositionConfig {
  std::size_t m = 8;
  std::size_t n = 40;
  double coverage = 0.5;
  std::uint64_t seed = 0;
  std::size_t merge_capacity = 0;  // 0 means n

  void validate() const {
    if (m < 1) throw ConfigurationError("decomposition m must be >= 1");
    if (n < 1) throw ConfigurationError("decomposition n must be >= 1");
    if (!(coverage > 0.0 && coverage <= 1.0))
      throw ConfigurationError("coverage must lie in (0, 1]");
  }
  std::size_t capacity() const { return merge_capacity ? merge_capacity : n; }
};

// Tiles [0, traj_len) into m disjoint windows and draws sampling rounds in
// each until ceil(coverage * width) distinct window indices have been drawn.
// Plans are ordered by window, then by round.
inline std::vector<SubProblemPlan> plan_subproblems(
    std::size_t traj_len, const DecompositionConfig& cfg) {
  cfg.validate();
  if (cfg.n > traj_len)
    throw ConfigurationError("sub-problem size " + std::to_string(cfg.n) +
                             " exceeds trajectory length " +
                             std::to_string(traj_len));
  if (cfg.m > traj_len)
    throw ConfigurationError("more sub-problems than data points");

  std::vector<SubProblemPlan> plans;
  for (std::size_t k = 0; k < cfg.m; ++k) {
    const std::size_t lo = k * traj_len / cfg.m;
    const std::size_t hi = (k + 1) * traj_len / cfg.m;
    const std::size_t width = hi - lo;
    const std::size_t take = std::min(cfg.n, width);
    const auto needed = static_cast<std::size_t>(
        std::ceil(cfg.coverage * static_cast<double>(width) - 1e-9));
    Rng rng(derive_seed(cfg.seed, {k}));
    std::vector<std::uint8_t> seen(width, 0);
    std::size_t covered = 0;
    do {
      SubProblemPlan p{k, lo, hi, {}};
      for (std::size_t i : rng.sample_without_replacement(width, take)) {
        p.sampled_indices.push_back(lo + i);
        if (!seen[i]) {
          seen[i] = 1;
          ++covered;
        }
      }
      plans.push_back(std::move(p));
    } while (covered < needed);
  }
  return plans;
}

// Per-pipeline solver accounting.
struct SolveTrace {
  std::size_t calls = 0;
  std::size_t largest_qubo = 0;
  double solver_time = 0.0;
  double wall_time = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

template <typename T>
std::vector<T> gather(std::span<const T> src,
                      std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(src[i]);
  return out;
}

// Solves the selection problem restricted to `idx` and returns the chosen
// global indices.
inline std::vector<std::size_t> solve_restricted(
    std::span<const std::size_t> idx, const MetricSeries& metric,
    const Weights& w, std::span<const double> times, const Sampler& solver,
    SolveTrace* trace) {
  if (idx.empty()) return {};
  const auto ef = gather<double>(metric.effectiveness, idx);
  const auto id = gather<double>(metric.input_diversity, idx);
  const auto od = gather<double>(metric.output_diversity, idx);
  const auto t = gather<double>(times, idx);
  SelectionProblem prob = build_selection_problem(ef, id, od, t, w);
  SampleSet set = solver(prob.qubo);
  if (trace) {
    ++trace->calls;
    trace->largest_qubo = std::max(trace->largest_qubo, idx.size());
    trace->solver_time += set.solver_time;
    trace->wall_time += set.wall_time;
    for (auto& s : prob.warnings) trace->warnings.push_back(std::move(s));
  }
  std::vector<std::size_t> out;
  for (std::size_t local : set.best().selection.indices())
    out.push_back(idx[local]);
  return out;
}

inline void check_shapes(const MetricSeries& metric,
                         std::span<const double> times) {
  metric.validate();
  if (times.size() != metric.size())
    throw ShapeError("time grid and metric series differ in length");
}

}  // namespace detail

// Best selection of each plan, as global indices. Solver errors are rethrown
// as SolverError naming the plan.
inline std::vector<std::vector<std::size_t>> solve_subproblems(
    std::span<const SubProblemPlan> plans, const MetricSeries& metric,
    const Weights& w, std::span<const double> times, const Sampler& solver,
    SolveTrace* trace = nullptr) {
  detail::check_shapes(metric, times);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(plans.size());
  for (std::size_t p = 0; p < plans.size(); ++p) {
    const SubProblemPlan& plan = plans[p];
    for (std::size_t i : plan.sampled_indices)
      if (i < plan.lo || i >= plan.hi || i >= metric.size())
        throw ShapeError("plan " + std::to_string(p) +
                         " samples an index outside its window");
    try {
      out.push_back(detail::solve_restricted(plan.sampled_indices, metric, w,
                                             times, solver, trace));
    } catch (const ConfigurationError&) {
      throw;
    } catch (const std::exception& e) {
      throw SolverError("plan " + std::to_string(p) + " (slice " +
                        std::to_string(plan.slice_index) + ", window [" +
                        std::to_string(plan.lo) + ", " +
                        std::to_string(plan.hi) + ")): " + e.what());
    }
  }
  return out;
}

// Final selection round over the union of the sub-solutions. A single
// sub-solution is returned as is. Unions larger than `capacity` are cut into
// contiguous chunks that are solved separately, and the survivors are merged
// again.
inline std::vector<std::size_t> merge_subsolutions(
    std::span<const std::vector<std::size_t>> selections,
    const MetricSeries& metric, const Weights& w,
    std::span<const double> times, const Sampler& solver,
    std::size_t capacity, SolveTrace* trace = nullptr) {
  if (selections.empty()) throw ShapeError("no sub-solutions to merge");
  if (capacity < 1) throw ConfigurationError("merge capacity must be >= 1");
  detail::check_shapes(metric, times);
  if (selections.size() == 1) return selections.front();

  std::set<std::size_t> u;
  for (const auto& s : selections) u.insert(s.begin(), s.end());
  std::vector<std::size_t> pool(u.begin(), u.end());

  while (pool.size() > capacity) {
    std::vector<std::size_t> next;
    for (std::size_t b = 0; b < pool.size(); b += capacity) {
      const std::size_t e = std::min(pool.size(), b + capacity);
      std::span<const std::size_t> chunk(pool.data() + b, e - b);
      auto got = detail::solve_restricted(chunk, metric, w, times, solver,
                                          trace);
      next.insert(next.end(), got.begin(), got.end());
    }
    if (next.size() >= pool.size()) {
      // Every chunk kept all of its points. Keep the first `capacity` of
      // them in time order so the final round stays within budget.
      next.resize(capacity);
    }
    pool = std::move(next);
  }
  return detail::solve_restricted(pool, metric, w, times, solver, trace);
}

// Plan, solve and merge in one call.
inline std::vector<std::size_t> select_points(
    const MetricSeries& metric, const Weights& w, std::span<const double> times,
    const DecompositionConfig& cfg, const Sampler& solver,
    SolveTrace* trace = nullptr,
    std::vector<SubProblemPlan>* plans_out = nullptr) {
  auto plans = plan_subproblems(metric.size(), cfg);
  auto subs = solve_subproblems(plans, metric, w, times, solver, trace);
  auto merged =
      merge_subsolutions(subs, metric, w, times, solver, cfg.capacity(), trace);
  if (plans_out) *plans_out = std::move(plans);
  return merged;
}

// Whole-trajectory selection without decomposition.
inline std::vector<std::size_t> select_whole(const MetricSeries& metric,
                                             const Weights& w,
                                             std::span<const double> times,
                                             const Sampler& solver,
                                             SolveTrace* trace = nullptr) {
  detail::check_shapes(metric, times);
  std::vector<std::size_t> all(metric.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return detail::solve_restricted(all, metric, w, times, solver, trace);
}

inline std::vector<double> sample_times(const SignalSpec& spec) {
  std::vector<double> t(spec.sample_count());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = spec.time_at(k);
  return t;
}

}  // namespace qamut
