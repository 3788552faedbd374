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

// Per-data-point adequacy metrics: effectiveness, input diversity and
// output diversity, all normalized to [0, 1].

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qamut/error.hpp"
#include "qamut/trajectory.hpp"

namespace qamut {

struct MetricSeries {
  std::string case_id;
  std::vector<double> effectiveness;
  std::vector<double> input_diversity;
  std::vector<double> output_diversity;

  std::size_t size() const { return effectiveness.size(); }

  void validate() const {
    if (input_diversity.size() != size() || output_diversity.size() != size())
      throw ShapeError("metric series '" + case_id + "' has ragged arrays");
    for (const auto* arr : {&effectiveness, &input_diversity, &output_diversity})
      for (double v : *arr)
        if (!(v >= 0.0 && v <= 1.0))
          throw ShapeError("metric series '" + case_id +
                           "' has a value outside [0, 1]");
  }
};

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

inline std::vector<double> effectiveness_series(const Trajectory& observed,
                                                const Trajectory& expected,
                                                const SignalSpec& spec) {
  if (observed.size() != expected.size())
    throw ShapeError("observed and expected outputs differ in length");
  std::vector<double> e(observed.size());
  const double range = spec.range();
  for (std::size_t k = 0; k < e.size(); ++k)
    e[k] = clamp01((std::abs(observed[k] - expected[k]) - spec.r_min) / range);
  return e;
}

// Vector-valued outputs: the pointwise Euclidean norm across components
// replaces the absolute difference.
inline std::vector<double> effectiveness_series(
    std::span<const Trajectory> observed, std::span<const Trajectory> expected,
    const SignalSpec& spec) {
  if (observed.size() != expected.size() || observed.empty())
    throw ShapeError("observed and expected output vectors differ in arity");
  const std::size_t n = observed.front().size();
  for (std::size_t c = 0; c < observed.size(); ++c)
    if (observed[c].size() != n || expected[c].size() != n)
      throw ShapeError("output components differ in length");
  std::vector<double> e(n);
  for (std::size_t k = 0; k < n; ++k) {
    double sq = 0.0;
    for (std::size_t c = 0; c < observed.size(); ++c) {
      double d = observed[c][k] - expected[c][k];
      sq += d * d;
    }
    e[k] = clamp01((std::sqrt(sq) - spec.r_min) / spec.range());
  }
  return e;
}

inline double slice_distance(std::span<const double> s1,
                             std::span<const double> s2, std::size_t window_len,
                             const SignalSpec& spec) {
  if (s1.empty() || s2.empty()) throw ShapeError("empty slice");
  if (s1.size() != s2.size() || s1.size() != window_len)
    throw ShapeError("slice lengths differ from window length");
  double sq = 0.0;
  for (std::size_t w = 0; w < window_len; ++w) {
    double d = s1[w] - s2[w];
    sq += d * d;
  }
  return clamp01(std::sqrt(sq) /
                 (std::sqrt(static_cast<double>(window_len)) * spec.range()));
}

// Entry k is the smallest normalized distance between the window of
// trajectories[case_index] around k and the same window of every other
// trajectory. Uses prefix sums of squared differences, so each pair costs
// O(n) instead of O(n * window).
inline std::vector<double> diversity_series(
    std::span<const Trajectory> trajectories, std::size_t case_index,
    std::size_t radius) {
  if (trajectories.size() < 2)
    throw InsufficientDataError("diversity needs at least two test cases");
  if (case_index >= trajectories.size())
    throw ShapeError("case index out of range");
  const Trajectory& self = trajectories[case_index];
  const std::size_t n = self.size();
  const double range = self.spec.range();
  for (const Trajectory& t : trajectories)
    if (t.size() != n) throw ShapeError("trajectories differ in length");

  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<double> prefix(n + 1);
  for (std::size_t j = 0; j < trajectories.size(); ++j) {
    if (j == case_index) continue;
    const Trajectory& other = trajectories[j];
    prefix[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double d = self[k] - other[k];
      prefix[k + 1] = prefix[k] + d * d;
    }
    for (std::size_t k = 0; k < n; ++k) {
      auto [lo, hi] = clamped_window(n, k, radius);
      double sq = std::max(0.0, prefix[hi + 1] - prefix[lo]);
      double len = static_cast<double>(hi - lo + 1);
      double dist = clamp01(std::sqrt(sq) / (std::sqrt(len) * range));
      best[k] = std::min(best[k], dist);
    }
  }
  return best;
}

inline std::vector<double> input_diversity_series(const TestSuite& suite,
                                                  std::size_t case_index,
                                                  std::size_t radius) {
  std::vector<Trajectory> inputs;
  inputs.reserve(suite.size());
  for (const TestCase& c : suite.cases) inputs.push_back(c.input);
  return diversity_series(inputs, case_index, radius);
}

inline std::vector<double> output_diversity_series(
    std::span<const Trajectory> outputs, std::size_t case_index,
    std::size_t radius) {
  return diversity_series(outputs, case_index, radius);
}

// All three series for every case. observed[i] / expected[i] are the SUT and
// reference outputs of suite.cases[i]; effectiveness is normalized by the
// expected output's signal range.
inline std::vector<MetricSeries> compute_metrics(
    const TestSuite& suite, std::span<const Trajectory> observed,
    std::span<const Trajectory> expected, std::size_t radius) {
  if (observed.size() != suite.size() || expected.size() != suite.size())
    throw ShapeError("one observed and one expected output per case required");
  std::vector<Trajectory> inputs;
  inputs.reserve(suite.size());
  for (const TestCase& c : suite.cases) inputs.push_back(c.input);

  std::vector<MetricSeries> out;
  out.reserve(suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) {
    MetricSeries m;
    m.case_id = suite.cases[i].id;
    m.effectiveness =
        effectiveness_series(observed[i], expected[i], expected[i].spec);
    m.input_diversity = diversity_series(inputs, i, radius);
    m.output_diversity = diversity_series(observed, i, radius);
    out.push_back(std::move(m));
  }
  return out;
}

// Tab-separated table: index, effectiveness, input_diversity,
// output_diversity; six fixed decimals.
inline void write_metric_table(std::ostream& os, const MetricSeries& m) {
  os << "index\teffectiveness\tinput_diversity\toutput_diversity\n";
  char buf[128];
  for (std::size_t k = 0; k < m.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu\t%.6f\t%.6f\t%.6f\n", k,
                  m.effectiveness[k], m.input_diversity[k],
                  m.output_diversity[k]);
    os << buf;
  }
}

}  // namespace qamut
