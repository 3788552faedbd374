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

// Seed test-case generation: bounded, rate-limited trajectories built from
// random control points joined by a monotone piecewise-cubic interpolant.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qamut/error.hpp"
#include "qamut/random.hpp"

namespace qamut {

// Absolute slack allowed on the per-step rate bound.
inline constexpr double kRateTolerance = 1e-9;

struct SignalSpec {
  std::string name = "signal";
  double r_min = 0.0;
  double r_max = 1.0;
  double max_rate = 1.0;       // units per second
  double duration = 10.0;      // seconds
  double sample_period = 0.01; // seconds

  void validate() const {
    if (!(sample_period > 0.0) || !std::isfinite(sample_period))
      throw SpecificationError("signal '" + name +
                               "': sample_period must be positive");
    if (!(duration > 0.0) || !std::isfinite(duration))
      throw SpecificationError("signal '" + name +
                               "': duration must be positive");
    if (!(r_min < r_max))
      throw SpecificationError("signal '" + name + "': r_min must be < r_max");
    if (!(max_rate >= 0.0) || !std::isfinite(max_rate))
      throw SpecificationError("signal '" + name +
                               "': max_rate must be non-negative");
    double steps = duration / sample_period;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
      throw SpecificationError(
          "signal '" + name +
          "': duration is not an integer multiple of sample_period");
  }

  // Samples at k * sample_period for k = 0 .. n-1, covering [0, duration].
  std::size_t sample_count() const {
    return static_cast<std::size_t>(std::llround(duration / sample_period)) + 1;
  }

  double range() const { return r_max - r_min; }
  // Largest admissible change between consecutive samples.
  double max_step() const { return max_rate * sample_period; }
  double time_at(std::size_t k) const {
    return static_cast<double>(k) * sample_period;
  }

  bool same_grid(const SignalSpec& o) const {
    return std::abs(duration - o.duration) <= 1e-9 * duration &&
           std::abs(sample_period - o.sample_period) <= 1e-12 * sample_period;
  }

  friend bool operator==(const SignalSpec&, const SignalSpec&) = default;
};

struct Trajectory {
  SignalSpec spec;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Returns a description of the first bound or rate violation, if any.
inline std::optional<std::string> find_violation(const Trajectory& t) {
  const SignalSpec& s = t.spec;
  if (t.values.size() != s.sample_count())
    return "length " + std::to_string(t.values.size()) + " != " +
           std::to_string(s.sample_count()) + " samples";
  const double step = s.max_step() + kRateTolerance;
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    double v = t.values[k];
    if (!(v >= s.r_min && v <= s.r_max)) {
      std::ostringstream os;
      os << "value " << v << " at index " << k << " outside [" << s.r_min
         << ", " << s.r_max << "]";
      return os.str();
    }
    if (k > 0 && std::abs(v - t.values[k - 1]) > step) {
      std::ostringstream os;
      os << "step " << std::abs(v - t.values[k - 1]) << " at index " << k
         << " exceeds " << s.max_step();
      return os.str();
    }
  }
  return std::nullopt;
}

inline bool is_valid(const Trajectory& t) { return !find_violation(t); }

struct ControlPoint {
  double time;
  double value;
};

struct TestCase {
  std::string id;
  Trajectory input;                              // the mutable input
  std::map<std::string, Trajectory> fixed_inputs;  // held constant
  std::vector<std::string> notes;                // provenance

  std::size_t size() const { return input.size(); }
};

struct TestSuite {
  std::vector<TestCase> cases;

  std::size_t size() const { return cases.size(); }

  void validate() const {
    std::set<std::string> ids;
    for (const TestCase& c : cases) {
      if (!ids.insert(c.id).second)
        throw SpecificationError("duplicate test case id '" + c.id + "'");
      if (!(c.input.spec == cases.front().input.spec))
        throw SpecificationError("case '" + c.id +
                                 "' does not share the suite's signal spec");
      for (const auto& [name, t] : c.fixed_inputs)
        if (!t.spec.same_grid(c.input.spec))
          throw SpecificationError("case '" + c.id + "': fixed input '" +
                                   name + "' has a different time grid");
    }
  }
};

// Index window [lo, hi] (inclusive) around center, clamped to [0, n).
inline std::pair<std::size_t, std::size_t> clamped_window(std::size_t n,
                                                          std::size_t center,
                                                          std::size_t radius) {
  std::size_t lo = center > radius ? center - radius : 0;
  std::size_t hi = std::min(n - 1, center + radius);
  return {lo, hi};
}

inline std::vector<double> slice(const Trajectory& t, std::size_t center,
                                 std::size_t radius) {
  if (center >= t.size())
    throw ShapeError("slice center " + std::to_string(center) +
                     " outside trajectory of length " +
                     std::to_string(t.size()));
  auto [lo, hi] = clamped_window(t.size(), center, radius);
  return {t.values.begin() + static_cast<std::ptrdiff_t>(lo),
          t.values.begin() + static_cast<std::ptrdiff_t>(hi) + 1};
}

namespace detail {

struct Knot {
  std::size_t index;
  double value;
};

// Fritsch-Carlson slopes in per-sample units.
inline std::vector<double> monotone_slopes(std::span<const Knot> knots) {
  const std::size_t m = knots.size();
  std::vector<double> h(m - 1), delta(m - 1), d(m, 0.0);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    h[k] = static_cast<double>(knots[k + 1].index - knots[k].index);
    delta[k] = (knots[k + 1].value - knots[k].value) / h[k];
  }
  d.front() = delta.front();
  d.back() = delta.back();
  for (std::size_t k = 1; k + 1 < m; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      d[k] = 0.0;
    } else {
      double w1 = 2.0 * h[k] + h[k - 1];
      double w2 = h[k] + 2.0 * h[k - 1];
      d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  return d;
}

// Fills out[first.index .. last.index] through the knots. Each segment is a
// monotone cubic Hermite piece followed by a forward pass that keeps every
// step within max_step while still landing exactly on the segment's end knot.
// Knots must be rate-feasible; samples outside the knot span are untouched.
inline void interpolate_into(std::span<const Knot> knots, double max_step,
                             std::span<double> out) {
  if (knots.empty()) return;
  if (knots.size() == 1) {
    out[knots[0].index] = knots[0].value;
    return;
  }
  const std::vector<double> d = monotone_slopes(knots);
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const std::size_t a = knots[s].index;
    const std::size_t b = knots[s + 1].index;
    const double va = knots[s].value;
    const double vb = knots[s + 1].value;
    const double h = static_cast<double>(b - a);
    out[a] = va;
    for (std::size_t k = a + 1; k < b; ++k) {
      double t = static_cast<double>(k - a) / h;
      double t2 = t * t, t3 = t2 * t;
      double y = (2 * t3 - 3 * t2 + 1) * va + (t3 - 2 * t2 + t) * h * d[s] +
                 (-2 * t3 + 3 * t2) * vb + (t3 - t2) * h * d[s + 1];
      double reach = max_step * static_cast<double>(b - k);
      double lo = std::max(out[k - 1] - max_step, vb - reach);
      double hi = std::min(out[k - 1] + max_step, vb + reach);
      if (lo > hi) lo = hi = (va <= vb ? hi : lo);
      out[k] = std::clamp(y, lo, hi);
    }
    out[b] = vb;
  }
}

inline void check_rate(const Knot& p, const Knot& q, double max_step,
                       double period) {
  double allowed = max_step * static_cast<double>(q.index - p.index);
  if (std::abs(q.value - p.value) > allowed + kRateTolerance) {
    std::ostringstream os;
    os << "control points (t=" << static_cast<double>(p.index) * period
       << ", v=" << p.value << ") and (t="
       << static_cast<double>(q.index) * period << ", v=" << q.value
       << ") need |dv|=" << std::abs(q.value - p.value)
       << " but the rate bound allows " << allowed;
    throw InfeasibleError(os.str());
  }
}

}  // namespace detail

// Random control points at strictly increasing sample instants, the first at
// t=0 and the last at t=duration. Each value is drawn inside the band reachable
// from its predecessor, so consecutive pairs are always rate-feasible.
inline std::vector<ControlPoint> generate_control_points(const SignalSpec& spec,
                                                         std::size_t n_points,
                                                         Rng& rng) {
  spec.validate();
  const std::size_t n = spec.sample_count();
  if (n_points < 2)
    throw SpecificationError("need at least two control points");
  if (n_points > n)
    throw SpecificationError("more control points than sample instants");

  std::vector<std::size_t> idx{0};
  for (std::size_t i : rng.sample_without_replacement(n - 2, n_points - 2))
    idx.push_back(i + 1);
  idx.push_back(n - 1);

  std::vector<ControlPoint> points;
  points.reserve(n_points);
  double prev = rng.uniform(spec.r_min, spec.r_max);
  points.push_back({0.0, prev});
  for (std::size_t k = 1; k < idx.size(); ++k) {
    double reach = spec.max_step() * static_cast<double>(idx[k] - idx[k - 1]);
    double lo = std::max(spec.r_min, prev - reach);
    double hi = std::min(spec.r_max, prev + reach);
    double v = rng.uniform(lo, hi);
    double t = k + 1 == idx.size() ? spec.duration : spec.time_at(idx[k]);
    points.push_back({t, v});
    prev = v;
  }
  return points;
}

inline Trajectory fit_trajectory(std::span<const ControlPoint> points,
                                 const SignalSpec& spec) {
  spec.validate();
  if (points.empty()) throw SpecificationError("no control points");
  const std::size_t n = spec.sample_count();

  std::vector<detail::Knot> knots;
  knots.reserve(points.size());
  for (const ControlPoint& p : points) {
    if (!(p.time >= -1e-9 && p.time <= spec.duration + 1e-9))
      throw SpecificationError("control point time outside [0, duration]");
    if (!(p.value >= spec.r_min && p.value <= spec.r_max))
      throw SpecificationError("control point value outside signal bounds");
    auto k = static_cast<std::size_t>(
        std::llround(std::max(0.0, p.time) / spec.sample_period));
    k = std::min(k, n - 1);
    if (!knots.empty() && k <= knots.back().index)
      throw SpecificationError(
          "control points must be sorted and map to distinct samples");
    knots.push_back({k, p.value});
  }
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    detail::check_rate(knots[i], knots[i + 1], spec.max_step(),
                       spec.sample_period);

  Trajectory t{spec, std::vector<double>(n)};
  detail::interpolate_into(knots, spec.max_step(), t.values);
  std::fill(t.values.begin(),
            t.values.begin() + static_cast<std::ptrdiff_t>(knots.front().index),
            knots.front().value);
  std::fill(t.values.begin() + static_cast<std::ptrdiff_t>(knots.back().index),
            t.values.end(), knots.back().value);
  for (double& v : t.values) v = std::clamp(v, spec.r_min, spec.r_max);
  return t;
}

inline std::string case_id(std::size_t i) {
  std::string s = std::to_string(i);
  if (s.size() < 3) s.insert(0, 3 - s.size(), '0');
  return "tc-" + s;
}

inline TestSuite generate_suite(const SignalSpec& spec, std::size_t suite_size,
                                std::size_t n_points, Rng& rng) {
  if (suite_size < 1) throw SpecificationError("suite_size must be >= 1");
  TestSuite suite;
  suite.cases.reserve(suite_size);
  for (std::size_t i = 0; i < suite_size; ++i) {
    auto points = generate_control_points(spec, n_points, rng);
    suite.cases.push_back({case_id(i), fit_trajectory(points, spec), {}, {}});
  }
  return suite;
}

}  // namespace qamut
