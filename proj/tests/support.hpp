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

// Shared fixtures for the unit and acceptance tests.

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "qamut/qubo.hpp"
#include "qamut/random.hpp"
#include "qamut/trajectory.hpp"

namespace qamut::testing {

// Dense QUBO with coefficients uniform in [-1, 1].
inline Qubo random_qubo(std::size_t n, Rng& rng) {
  Qubo q(n);
  for (std::size_t i = 0; i < n; ++i) q.set_linear(i, rng.uniform(-1.0, 1.0));
  for (double& v : q.packed_quadratic()) v = rng.uniform(-1.0, 1.0);
  return q;
}

inline Selection random_selection(std::size_t n, Rng& rng) {
  Selection s(n);
  for (auto& b : s.bits) b = rng.bernoulli(0.5);
  return s;
}

// Straightforward double loop over the definition, independent of energy().
inline double reference_energy(const Qubo& q, const Selection& x) {
  double e = q.offset();
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!x[i]) continue;
    e += q.linear(i);
    for (std::size_t j = i + 1; j < q.size(); ++j)
      if (x[j]) e += q.quadratic(i, j);
  }
  return e;
}

// Minimum over all 2^n assignments by plain binary counting.
inline double brute_force_minimum(const Qubo& q) {
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t total = std::uint64_t{1} << q.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Selection s(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) s.bits[i] = mask >> i & 1u;
    best = std::min(best, reference_energy(q, s));
  }
  return best;
}

inline std::vector<double> random_values(std::size_t n, Rng& rng,
                                         double lo = 0.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

// Pedal signal of the running example: [0, 1], 0.5 per second, 10 s at
// 0.01 s.
inline SignalSpec pedal_spec() { return {"pedal", 0.0, 1.0, 0.5, 10.0, 0.01}; }

inline TestCase constant_case(const SignalSpec& s, double v,
                              std::string id = "tc-000") {
  return {std::move(id), {s, std::vector<double>(s.sample_count(), v)}, {}, {}};
}

}  // namespace qamut::testing
