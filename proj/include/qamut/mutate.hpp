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

// Mutation of selected data points. Each point moves toward the rail its
// local effectiveness correlates with, and a smoothing region around it is
// re-interpolated so the trajectory stays bounded and rate-limited.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qamut/error.hpp"
#include "qamut/metrics.hpp"
#include "qamut/trajectory.hpp"

namespace qamut {

struct MutationPoint {
  std::size_t index = 0;
  double correlation = 0.0;
  double original = 0.0;
  double mutated_value = 0.0;

  friend bool operator==(const MutationPoint&, const MutationPoint&) = default;
};

struct MutationPlan {
  std::string case_id;
  std::vector<MutationPoint> points;  // ascending index
  std::size_t smoothing_radius = 100;

  friend bool operator==(const MutationPlan&, const MutationPlan&) = default;
};

// Pearson correlation; 0 when either series is constant.
inline double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ShapeError("correlation inputs differ in length");
  if (x.size() < 2)
    throw InsufficientDataError("correlation needs at least two samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// u^(1-c) on the unit-normalized value, rescaled to the signal range. c = 0
// returns the value untouched; c = 1 always reaches r_max, including u = 0.
inline double mutate_point(double value, double c, const SignalSpec& spec) {
  if (!(c >= -1.0 && c <= 1.0))
    throw SpecificationError("correlation outside [-1, 1]");
  if (c == 0.0) return value;
  const double exponent = 1.0 - c;
  if (exponent == 0.0) return spec.r_max;
  const double u = std::clamp((value - spec.r_min) / spec.range(), 0.0, 1.0);
  return std::clamp(std::pow(u, exponent) * spec.range() + spec.r_min,
                    spec.r_min, spec.r_max);
}

// Drops selections closer than d_min seconds to the previously kept one,
// scanning in index order.
inline std::vector<std::size_t> thin_selection(
    std::vector<std::size_t> indices, double sample_period, double d_min) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::vector<std::size_t> kept;
  for (std::size_t i : indices)
    if (kept.empty() ||
        static_cast<double>(i - kept.back()) * sample_period >=
            d_min - 1e-9 * sample_period)
      kept.push_back(i);
  return kept;
}

inline MutationPlan plan_mutations(const TestCase& tc,
                                   std::span<const std::size_t> selection,
                                   const MetricSeries& metric,
                                   std::size_t window_radius,
                                   std::size_t smoothing_radius, double d_min) {
  const Trajectory& in = tc.input;
  if (metric.size() != in.size())
    throw ShapeError("metric series and case '" + tc.id +
                     "' differ in length");
  for (std::size_t i : selection)
    if (i >= in.size())
      throw ShapeError("selected index " + std::to_string(i) +
                       " outside case '" + tc.id + "'");
  MutationPlan plan{tc.id, {}, smoothing_radius};
  const auto kept = thin_selection({selection.begin(), selection.end()},
                                   in.spec.sample_period, d_min);
  for (std::size_t idx : kept) {
    auto [lo, hi] = clamped_window(in.size(), idx, window_radius);
    const auto len = static_cast<std::ptrdiff_t>(hi - lo + 1);
    const auto off = static_cast<std::ptrdiff_t>(lo);
    const double c =
        hi > lo ? correlation({in.values.data() + off, static_cast<std::size_t>(len)},
                              {metric.effectiveness.data() + off,
                               static_cast<std::size_t>(len)})
                : 0.0;
    plan.points.push_back({idx, c, in[idx], mutate_point(in[idx], c, in.spec)});
  }
  return plan;
}

// Sets each planned index to its mutated value and re-interpolates the
// smoothing region around it. A target the rate bound cannot reach from the
// region's boundary samples is moved to the nearest reachable value and the
// adjustment is recorded in the returned case's notes.
inline TestCase apply_mutations(const TestCase& tc, const MutationPlan& plan) {
  TestCase out = tc;
  Trajectory& t = out.input;
  const SignalSpec& s = t.spec;
  const std::size_t n = t.size();
  const double step = s.max_step();
  for (const MutationPoint& p : plan.points) {
    if (p.index >= n)
      throw ShapeError("planned index " + std::to_string(p.index) +
                       " outside case '" + tc.id + "'");
    auto [lo, hi] = clamped_window(n, p.index, plan.smoothing_radius);
    double feas_lo = s.r_min, feas_hi = s.r_max;
    if (lo < p.index) {
      const double reach = step * static_cast<double>(p.index - lo);
      feas_lo = std::max(feas_lo, t[lo] - reach);
      feas_hi = std::min(feas_hi, t[lo] + reach);
    }
    if (hi > p.index) {
      const double reach = step * static_cast<double>(hi - p.index);
      feas_lo = std::max(feas_lo, t[hi] - reach);
      feas_hi = std::min(feas_hi, t[hi] + reach);
    }
    if (feas_lo > feas_hi) feas_lo = feas_hi = t[p.index];
    const double target = std::clamp(p.mutated_value, feas_lo, feas_hi);
    if (target != p.mutated_value) {
      std::ostringstream os;
      os << "index " << p.index << ": mutated value " << p.mutated_value
         << " not reachable within the rate bound; used " << target;
      out.notes.push_back(os.str());
    }
    std::vector<detail::Knot> knots;
    if (lo < p.index) knots.push_back({lo, t[lo]});
    knots.push_back({p.index, target});
    if (hi > p.index) knots.push_back({hi, t[hi]});
    detail::interpolate_into(knots, step, t.values);
    for (std::size_t k = lo; k <= hi; ++k)
      t.values[k] = std::clamp(t.values[k], s.r_min, s.r_max);
  }
  if (!plan.points.empty())
    out.notes.push_back("mutated " + std::to_string(plan.points.size()) +
                        " point(s) of '" + tc.id + "'");
  return out;
}

inline void write_plan_table(std::ostream& os,
                             std::span<const MutationPlan> plans) {
  os << "case_id\tindex\tcorrelation\toriginal\tmutated\n";
  char buf[160];
  for (const MutationPlan& p : plans)
    for (const MutationPoint& m : p.points) {
      std::snprintf(buf, sizeof buf, "\t%zu\t%.6f\t%.6f\t%.6f\n", m.index,
                    m.correlation, m.original, m.mutated_value);
      os << p.case_id << buf;
    }
}

}  // namespace qamut
