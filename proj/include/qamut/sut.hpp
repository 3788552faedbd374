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

// Discrete-time plants used as systems under test, single-fault variants of
// them, and the epsilon-conformance oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "qamut/error.hpp"
#include "qamut/random.hpp"
#include "qamut/trajectory.hpp"

namespace qamut {

enum class PlantKind { kEngineMap, kFirstOrderTracker };

inline std::string to_string(PlantKind k) {
  return k == PlantKind::kEngineMap ? "engine_map" : "first_order_tracker";
}

inline PlantKind parse_plant_kind(const std::string& s) {
  if (s == "engine_map" || s == "engine") return PlantKind::kEngineMap;
  if (s == "first_order_tracker" || s == "tracker")
    return PlantKind::kFirstOrderTracker;
  throw ConfigurationError("unknown plant kind '" + s + "'");
}

enum class Comparison { kLt, kLe, kGt, kGe, kEq, kNe };

inline bool compare(Comparison op, double a, double b) {
  switch (op) {
    case Comparison::kLt: return a < b;
    case Comparison::kLe: return a <= b;
    case Comparison::kGt: return a > b;
    case Comparison::kGe: return a >= b;
    case Comparison::kEq: return a == b;
    case Comparison::kNe: return a != b;
  }
  return false;
}

inline std::string to_string(Comparison op) {
  static const char* names[] = {"<", "<=", ">", ">=", "==", "!="};
  return names[static_cast<int>(op)];
}

inline Comparison parse_comparison(const std::string& s) {
  for (int i = 0; i < 6; ++i)
    if (to_string(static_cast<Comparison>(i)) == s)
      return static_cast<Comparison>(i);
  throw ConfigurationError("unknown comparison '" + s + "'");
}

struct DelayFault {
  std::size_t k = 0;  // samples
};
struct NoiseFault {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};
// Holds a stale value over samples [begin, end): `held` when given, else the
// output at `begin`.
struct ValueDropFault {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::optional<double> held;
};
enum class ArithmeticOp { kScale, kOffset, kNegate };
struct ArithmeticFault {
  std::string param = "gain";
  ArithmeticOp op = ArithmeticOp::kScale;
  double operand = 1.0;
};
// Replaces the comparison guarding one side of the input saturation.
enum class ClampSite { kLower, kUpper };
struct LogicalFault {
  ClampSite site = ClampSite::kLower;
  Comparison op = Comparison::kLt;
};

using FaultOperator = std::variant<DelayFault, NoiseFault, ValueDropFault,
                                   ArithmeticFault, LogicalFault>;

struct FaultSpec {
  std::string id;
  FaultOperator op;
};

inline std::string operator_name(const FaultOperator& op) {
  static const char* names[] = {"delay", "noise", "value_drop",
                                "arithmetic_replacement",
                                "logical_replacement"};
  return names[op.index()];
}

inline std::string describe(const FaultOperator& op) {
  std::ostringstream os;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, DelayFault>) {
          os << "delay k=" << f.k;
        } else if constexpr (std::is_same_v<T, NoiseFault>) {
          os << "noise sigma=" << f.sigma << " seed=" << f.seed;
        } else if constexpr (std::is_same_v<T, ValueDropFault>) {
          os << "value_drop [" << f.begin << ", " << f.end << ")";
          if (f.held) os << " held=" << *f.held;
        } else if constexpr (std::is_same_v<T, ArithmeticFault>) {
          static const char* ops[] = {"scale", "offset", "negate"};
          os << "arithmetic " << f.param << " " << ops[static_cast<int>(f.op)]
             << " " << f.operand;
        } else {
          os << "logical " << (f.site == ClampSite::kLower ? "lower" : "upper")
             << " " << to_string(f.op);
        }
      },
      op);
  return os.str();
}

struct PlantModel {
  PlantKind kind = PlantKind::kEngineMap;
  // engine_map: gain, bias, in_min, in_max.
  // first_order_tracker: additionally tau (seconds).
  std::map<std::string, double> params;
  Comparison lower_op = Comparison::kLt;  // x lower_op in_min -> x = in_min
  Comparison upper_op = Comparison::kGt;  // x upper_op in_max -> x = in_max
  std::optional<FaultSpec> fault;

  double param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end())
      throw ConfigurationError(to_string(kind) + " model lacks parameter '" +
                               name + "'");
    return it->second;
  }

  void validate() const {
    for (const char* p : {"gain", "bias", "in_min", "in_max"}) param(p);
    if (kind == PlantKind::kFirstOrderTracker && !(param("tau") > 0.0))
      throw ConfigurationError("tracker time constant must be positive");
  }
};

// Fuel map of the running example: 5 mL per unit pedal over pedal [0, 1].
inline PlantModel engine_model(double gain = 5.0) {
  return {PlantKind::kEngineMap,
          {{"gain", gain}, {"bias", 0.0}, {"in_min", 0.0}, {"in_max", 1.0}},
          Comparison::kLt, Comparison::kGt, std::nullopt};
}

inline PlantModel tracker_model(double tau = 0.5, double gain = 1.0) {
  return {PlantKind::kFirstOrderTracker,
          {{"gain", gain},
           {"bias", 0.0},
           {"in_min", 0.0},
           {"in_max", 1.0},
           {"tau", tau}},
          Comparison::kLt, Comparison::kGt, std::nullopt};
}

inline PlantModel make_model(PlantKind kind) {
  return kind == PlantKind::kEngineMap ? engine_model() : tracker_model();
}

// Output signal range of the fault-free model for a given input spec.
inline SignalSpec output_spec(const PlantModel& m, const SignalSpec& in) {
  SignalSpec out = in;
  const double gain = m.param("gain"), bias = m.param("bias");
  const double a = gain * m.param("in_min") + bias;
  const double b = gain * m.param("in_max") + bias;
  out.name = m.kind == PlantKind::kEngineMap ? "fuel" : "response";
  out.r_min = std::min(a, b);
  out.r_max = std::max(a, b);
  out.max_rate = std::abs(gain) * in.max_rate;
  return out;
}

// Returns a variant of `m` carrying exactly one fault.
inline PlantModel apply_fault(const PlantModel& m, const FaultSpec& f) {
  if (m.fault)
    throw ConfigurationError("model already carries fault '" + m.fault->id +
                             "'");
  PlantModel out = m;
  if (const auto* a = std::get_if<ArithmeticFault>(&f.op)) {
    auto it = out.params.find(a->param);
    if (it == out.params.end())
      throw ConfigurationError("fault '" + f.id + "': " + to_string(m.kind) +
                               " has no parameter '" + a->param + "'");
    switch (a->op) {
      case ArithmeticOp::kScale: it->second *= a->operand; break;
      case ArithmeticOp::kOffset: it->second += a->operand; break;
      case ArithmeticOp::kNegate: it->second = -it->second; break;
    }
  } else if (const auto* l = std::get_if<LogicalFault>(&f.op)) {
    (l->site == ClampSite::kLower ? out.lower_op : out.upper_op) = l->op;
  } else if (const auto* d = std::get_if<ValueDropFault>(&f.op)) {
    if (d->end < d->begin)
      throw ConfigurationError("fault '" + f.id + "': empty-or-reversed drop");
  } else if (const auto* nz = std::get_if<NoiseFault>(&f.op)) {
    if (!(nz->sigma >= 0.0))
      throw ConfigurationError("fault '" + f.id + "': negative noise sigma");
  }
  out.fault = f;
  return out;
}

inline Trajectory simulate(const PlantModel& m, const Trajectory& input) {
  m.validate();
  const double gain = m.param("gain"), bias = m.param("bias");
  const double in_min = m.param("in_min"), in_max = m.param("in_max");
  auto saturate = [&](double x) {
    if (compare(m.lower_op, x, in_min)) x = in_min;
    if (compare(m.upper_op, x, in_max)) x = in_max;
    return x;
  };

  const std::size_t n = input.size();
  Trajectory out{output_spec(m, input.spec), std::vector<double>(n, 0.0)};
  if (m.kind == PlantKind::kEngineMap) {
    for (std::size_t k = 0; k < n; ++k)
      out.values[k] = gain * saturate(input[k]) + bias;
  } else {
    const double a = input.spec.sample_period / m.param("tau");
    for (std::size_t k = 0; k + 1 < n; ++k)
      out.values[k + 1] =
          out.values[k] + a * (gain * saturate(input[k]) + bias - out.values[k]);
  }

  if (!m.fault) return out;
  std::vector<double>& v = out.values;
  if (const auto* d = std::get_if<DelayFault>(&m.fault->op)) {
    if (d->k > 0) {
      std::vector<double> shifted(n, 0.0);
      for (std::size_t k = d->k; k < n; ++k) shifted[k] = v[k - d->k];
      v = std::move(shifted);
    }
  } else if (const auto* nz = std::get_if<NoiseFault>(&m.fault->op)) {
    if (nz->sigma > 0.0) {
      Rng rng(nz->seed);
      for (double& x : v) x += rng.normal(0.0, nz->sigma);
    }
  } else if (const auto* dr = std::get_if<ValueDropFault>(&m.fault->op)) {
    if (dr->begin < std::min(dr->end, n)) {
      const double held = dr->held.value_or(v[dr->begin]);
      for (std::size_t k = dr->begin; k < std::min(dr->end, n); ++k)
        v[k] = held;
    }
  }
  return out;
}

inline Trajectory simulate(const PlantModel& m, const TestCase& tc) {
  if (!tc.fixed_inputs.empty())
    throw ConfigurationError(to_string(m.kind) +
                             " takes one input; case '" + tc.id + "' has " +
                             std::to_string(1 + tc.fixed_inputs.size()));
  return simulate(m, tc.input);
}

struct Verdict {
  bool pass = true;
  double max_distance = 0.0;
  std::optional<std::size_t> first_violation_index;
  double epsilon = 0.0;
};

inline Verdict conformance(const Trajectory& observed,
                           const Trajectory& expected, double epsilon) {
  if (observed.size() != expected.size())
    throw ShapeError("observed and expected outputs differ in length");
  Verdict v;
  v.epsilon = epsilon;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double d = std::abs(observed[k] - expected[k]);
    v.max_distance = std::max(v.max_distance, d);
    if (d > epsilon && !v.first_violation_index) v.first_violation_index = k;
  }
  v.pass = v.max_distance <= epsilon;
  return v;
}

// Seeded corpus of `per_operator` faults for each of the five operators.
// Delays grow 1, 2, ... samples; noise sigma grows in steps of 0.5% of the
// output range; drops cover random intervals; arithmetic faults scale the
// gain by 1 +/- 2% steps; logical faults cycle through six replaced
// comparisons.
inline std::vector<FaultSpec> fault_corpus(const PlantModel& m,
                                           const SignalSpec& in,
                                           std::size_t per_operator,
                                           std::uint64_t seed) {
  const SignalSpec out = output_spec(m, in);
  const std::size_t n = in.sample_count();
  Rng rng(derive_seed(seed, {0x666175}));
  std::vector<FaultSpec> corpus;
  auto id = [](const char* tag, std::size_t i) {
    std::string s = std::to_string(i);
    if (s.size() < 2) s.insert(0, 1, '0');
    return std::string(tag) + "-" + s;
  };
  for (std::size_t i = 0; i < per_operator; ++i)
    corpus.push_back({id("delay", i), DelayFault{i + 1}});
  for (std::size_t i = 0; i < per_operator; ++i)
    corpus.push_back(
        {id("noise", i),
         NoiseFault{0.005 * static_cast<double>(i + 1) * out.range() / 5.0,
                    derive_seed(seed, {0x6e6f, i})}});
  for (std::size_t i = 0; i < per_operator; ++i) {
    const std::size_t len = std::min<std::size_t>(
        n - 1, static_cast<std::size_t>(rng.uniform_int(n / 20, n / 4)));
    const auto begin = static_cast<std::size_t>(rng.uniform_int(0, n - 1 - len));
    corpus.push_back({id("drop", i), ValueDropFault{begin, begin + len, {}}});
  }
  for (std::size_t i = 0; i < per_operator; ++i) {
    const double step = 0.02 * static_cast<double>(i / 2 + 1);
    corpus.push_back({id("arith", i),
                      ArithmeticFault{"gain", ArithmeticOp::kScale,
                                      i % 2 == 0 ? 1.0 + step : 1.0 - step}});
  }
  static const LogicalFault kLogical[] = {
      {ClampSite::kLower, Comparison::kGt}, {ClampSite::kUpper, Comparison::kLt},
      {ClampSite::kLower, Comparison::kGe}, {ClampSite::kUpper, Comparison::kLe},
      {ClampSite::kLower, Comparison::kNe}, {ClampSite::kUpper, Comparison::kNe}};
  for (std::size_t i = 0; i < per_operator; ++i)
    corpus.push_back({id("logic", i), kLogical[i % 6]});
  return corpus;
}

}  // namespace qamut
