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

// QUBO model and the objective builders used to pick data points:
//
//   min  sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j + offset
//
// Each metric objective (sum_i v_i x_i - L)^2 expands, using x_i^2 = x_i and
// dropping the constant L^2, into linear terms v_i^2 - 2 L v_i and quadratic
// terms 2 v_i v_j.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qamut/error.hpp"

namespace qamut {

// Dense QUBO over n binary variables. Quadratic coefficients live in a packed
// upper triangle; zero means "no interaction".
class Qubo {
 public:
  Qubo() = default;
  explicit Qubo(std::size_t n)
      : n_(n), linear_(n, 0.0), upper_(n < 2 ? 0 : n * (n - 1) / 2, 0.0) {}

  std::size_t size() const { return n_; }

  double linear(std::size_t i) const { return linear_[i]; }
  void set_linear(std::size_t i, double v) { linear_[i] = v; }
  void add_linear(std::size_t i, double v) { linear_[i] += v; }
  std::span<const double> linear_terms() const { return linear_; }

  // Order-insensitive; i != j.
  double quadratic(std::size_t i, std::size_t j) const {
    return upper_[packed(i, j)];
  }
  void set_quadratic(std::size_t i, std::size_t j, double v) {
    upper_[packed(i, j)] = v;
  }
  void add_quadratic(std::size_t i, std::size_t j, double v) {
    upper_[packed(i, j)] += v;
  }

  double offset() const { return offset_; }
  void set_offset(double v) { offset_ = v; }

  // Calls f(i, j, value) for every nonzero coefficient with i < j, in
  // row-major order.
  template <typename F>
  void for_each_quadratic(F&& f) const {
    std::size_t p = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j, ++p)
        if (upper_[p] != 0.0) f(i, j, upper_[p]);
  }

  std::size_t num_interactions() const {
    return static_cast<std::size_t>(
        std::count_if(upper_.begin(), upper_.end(),
                      [](double v) { return v != 0.0; }));
  }

  // Raw packed storage; row i holds (i, i+1) .. (i, n-1).
  std::span<const double> packed_quadratic() const { return upper_; }
  std::span<double> packed_quadratic() { return upper_; }

  friend bool operator==(const Qubo&, const Qubo&) = default;

 private:
  std::size_t packed(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    if (i == j || j >= n_)
      throw ShapeError("quadratic index (" + std::to_string(i) + ", " +
                       std::to_string(j) + ") invalid for n=" +
                       std::to_string(n_));
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  std::size_t n_ = 0;
  std::vector<double> linear_;
  std::vector<double> upper_;
  double offset_ = 0.0;
};

// A 0/1 assignment; compares lexicographically.
struct Selection {
  std::vector<std::uint8_t> bits;

  Selection() = default;
  explicit Selection(std::size_t n) : bits(n, 0) {}
  explicit Selection(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

  static Selection from_indices(std::size_t n,
                                std::span<const std::size_t> indices) {
    Selection s(n);
    for (std::size_t i : indices) {
      if (i >= n) throw ShapeError("selection index out of range");
      s.bits[i] = 1;
    }
    return s;
  }

  std::size_t size() const { return bits.size(); }
  bool operator[](std::size_t i) const { return bits[i] != 0; }
  std::size_t count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
  }
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) out.push_back(i);
    return out;
  }

  friend auto operator<=>(const Selection&, const Selection&) = default;
  friend bool operator==(const Selection&, const Selection&) = default;
};

inline double energy(const Qubo& q, const Selection& x) {
  if (x.size() != q.size())
    throw ShapeError("selection length " + std::to_string(x.size()) +
                     " != QUBO size " + std::to_string(q.size()));
  const std::vector<std::size_t> on = x.indices();
  double e = q.offset();
  for (std::size_t a = 0; a < on.size(); ++a) {
    e += q.linear(on[a]);
    for (std::size_t b = a + 1; b < on.size(); ++b)
      e += q.quadratic(on[a], on[b]);
  }
  return e;
}

struct Weights {
  double w_ef = 0.25;
  double w_id = 0.125;
  double w_od = 0.125;
  double w_num = 0.5;
  double penalty = 1000.0;
  double d_min = 2.0;  // seconds

  void validate() const {
    if (w_ef < 0 || w_id < 0 || w_od < 0 || w_num < 0)
      throw ConfigurationError("objective weights must be non-negative");
    if (!(penalty > 0)) throw ConfigurationError("penalty must be positive");
    if (!(d_min >= 0)) throw ConfigurationError("d_min must be non-negative");
  }
};

// (sum_i v_i x_i - target)^2 without its constant target^2.
inline Qubo build_metric_objective(std::span<const double> values,
                                   double target) {
  Qubo q(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw ShapeError("metric value at " + std::to_string(i) +
                       " is not finite");
    q.set_linear(i, values[i] * values[i] - 2.0 * target * values[i]);
  }
  auto packed = q.packed_quadratic();
  std::size_t p = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j, ++p)
      packed[p] = 2.0 * values[i] * values[j];
  return q;
}

// (sum_i x_i)^2 = sum_i x_i + 2 sum_{i<j} x_i x_j.
inline Qubo build_count_objective(std::size_t n) {
  Qubo q(n);
  for (std::size_t i = 0; i < n; ++i) q.set_linear(i, 1.0);
  for (double& v : q.packed_quadratic()) v = 2.0;
  return q;
}

// penalty on every pair closer than d_min seconds. times must be ascending.
inline Qubo build_proximity_constraint(std::span<const double> times,
                                       double d_min, double penalty) {
  Qubo q(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t j = i + 1;
         j < times.size() && std::abs(times[j] - times[i]) < d_min; ++j)
      q.add_quadratic(i, j, penalty);
  return q;
}

using WeightedPart = std::pair<double, std::reference_wrapper<const Qubo>>;

inline Qubo assemble(std::span<const WeightedPart> parts) {
  if (parts.empty()) throw ShapeError("nothing to assemble");
  const std::size_t n = parts.front().second.get().size();
  Qubo out(n);
  for (const auto& [w, ref] : parts) {
    const Qubo& q = ref.get();
    if (q.size() != n)
      throw ShapeError("cannot assemble QUBOs of sizes " + std::to_string(n) +
                       " and " + std::to_string(q.size()));
    for (std::size_t i = 0; i < n; ++i) out.add_linear(i, w * q.linear(i));
    auto dst = out.packed_quadratic();
    auto src = q.packed_quadratic();
    for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += w * src[p];
    out.set_offset(out.offset() + w * q.offset());
  }
  return out;
}

inline Qubo assemble(std::initializer_list<WeightedPart> parts) {
  return assemble(std::span<const WeightedPart>(parts.begin(), parts.size()));
}

// Largest energy decrease that switching any single variable on can achieve,
// taken over all possible states of the other variables.
inline double max_single_flip_gain(const Qubo& q) {
  const std::size_t n = q.size();
  std::vector<double> gain(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) gain[i] = std::max(0.0, -q.linear(i));
  q.for_each_quadratic([&](std::size_t i, std::size_t j, double v) {
    if (v < 0) {
      gain[i] -= v;
      gain[j] -= v;
    }
  });
  return gain.empty() ? 0.0 : *std::max_element(gain.begin(), gain.end());
}

inline double sum_abs_coefficients(const Qubo& q) {
  double s = 0.0;
  for (double v : q.linear_terms()) s += std::abs(v);
  for (double v : q.packed_quadratic()) s += std::abs(v);
  return s;
}

// Assembled selection problem for one set of candidate data points.
struct SelectionProblem {
  Qubo qubo;
  Qubo objective;  // weighted objectives without the proximity constraint
  std::vector<std::string> warnings;
};

// Builds w_ef*O_ef + w_id*O_id + w_od*O_od + w_num*O_num + C. The
// effectiveness target is the local sum of effectiveness; the diversity and
// count targets are 0.
//
// Throws ConfigurationError when the penalty cannot dominate: if some
// variable could lower the objective by at least `penalty` on its own, a
// minimizer might keep a close pair. Warns when penalty is under ten times
// the summed objective coefficient magnitude.
inline SelectionProblem build_selection_problem(
    std::span<const double> effectiveness, std::span<const double> input_div,
    std::span<const double> output_div, std::span<const double> times,
    const Weights& w) {
  w.validate();
  const std::size_t n = effectiveness.size();
  if (input_div.size() != n || output_div.size() != n || times.size() != n)
    throw ShapeError("metric and time arrays differ in length");
  for (std::size_t i = 1; i < n; ++i)
    if (times[i] < times[i - 1])
      throw ShapeError("candidate times must be ascending");

  const double l_ef =
      std::accumulate(effectiveness.begin(), effectiveness.end(), 0.0);
  const Qubo ef = build_metric_objective(effectiveness, l_ef);
  const Qubo id = build_metric_objective(input_div, 0.0);
  const Qubo od = build_metric_objective(output_div, 0.0);
  const Qubo num = build_count_objective(n);
  const Qubo c = build_proximity_constraint(times, w.d_min, w.penalty);

  SelectionProblem out;
  out.objective =
      assemble({{w.w_ef, ef}, {w.w_id, id}, {w.w_od, od}, {w.w_num, num}});
  out.qubo = assemble({{1.0, out.objective}, {1.0, c}});

  if (c.num_interactions() > 0) {
    const double gain = max_single_flip_gain(out.objective);
    if (!(w.penalty > gain))
      throw ConfigurationError(
          "penalty " + std::to_string(w.penalty) +
          " does not exceed the largest single-variable objective gain " +
          std::to_string(gain));
  }
  const double scale = sum_abs_coefficients(out.objective);
  if (w.penalty < 10.0 * scale)
    out.warnings.push_back("penalty " + std::to_string(w.penalty) +
                           " is below 10x the summed objective coefficients (" +
                           std::to_string(scale) + ")");
  return out;
}

// True when no two selected points are closer than d_min seconds.
inline bool satisfies_proximity(const Selection& x,
                                std::span<const double> times, double d_min) {
  const auto on = x.indices();
  for (std::size_t a = 0; a < on.size(); ++a)
    for (std::size_t b = a + 1; b < on.size(); ++b)
      if (std::abs(times[on[b]] - times[on[a]]) < d_min) return false;
  return true;
}

}  // namespace qamut
