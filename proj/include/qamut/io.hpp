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

// JSON encodings of the library's documents.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qamut/decompose.hpp"
#include "qamut/error.hpp"
#include "qamut/metrics.hpp"
#include "qamut/mutate.hpp"
#include "qamut/qubo.hpp"
#include "qamut/samplers.hpp"
#include "qamut/sut.hpp"
#include "qamut/trajectory.hpp"

namespace qamut {

using Json = nlohmann::json;

// Errors thrown while decoding surface as SpecificationError with the
// offending document named.
template <typename F>
auto decode(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw SpecificationError("malformed " + what + ": " + e.what());
  }
}

inline Json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw SpecificationError("cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SpecificationError(p.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& p,
                            const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

inline void write_json_file(const std::filesystem::path& p, const Json& j) {
  write_text_file(p, j.dump(2) + "\n");
}

// ---- trajectory -----------------------------------------------------------

inline Json to_json(const SignalSpec& s) {
  return {{"name", s.name},         {"r_min", s.r_min},
          {"r_max", s.r_max},       {"max_rate", s.max_rate},
          {"duration", s.duration}, {"sample_period", s.sample_period}};
}

inline SignalSpec spec_from_json(const Json& j) {
  return decode("signal spec", [&] {
    SignalSpec s;
    s.name = j.value("name", s.name);
    s.r_min = j.at("r_min").get<double>();
    s.r_max = j.at("r_max").get<double>();
    s.max_rate = j.at("max_rate").get<double>();
    s.duration = j.at("duration").get<double>();
    s.sample_period = j.value("sample_period", s.sample_period);
    s.validate();
    return s;
  });
}

inline Json to_json(const TestSuite& suite) {
  Json cases = Json::array();
  for (const TestCase& c : suite.cases) {
    Json fixed = Json::object();
    for (const auto& [name, t] : c.fixed_inputs)
      fixed[name] = {{"spec", to_json(t.spec)}, {"values", t.values}};
    cases.push_back({{"id", c.id},
                     {"values", c.input.values},
                     {"fixed_inputs", fixed},
                     {"notes", c.notes}});
  }
  Json spec = suite.cases.empty() ? Json(nullptr)
                                  : to_json(suite.cases.front().input.spec);
  return {{"spec", spec}, {"cases", cases}};
}

inline TestSuite suite_from_json(const Json& j) {
  return decode("test suite", [&] {
    const SignalSpec spec = spec_from_json(j.at("spec"));
    TestSuite suite;
    for (const Json& c : j.at("cases")) {
      TestCase tc;
      tc.id = c.at("id").get<std::string>();
      tc.input = {spec, c.at("values").get<std::vector<double>>()};
      if (auto v = find_violation(tc.input))
        throw SpecificationError("case '" + tc.id + "': " + *v);
      if (c.contains("fixed_inputs"))
        for (const auto& [name, t] : c.at("fixed_inputs").items())
          tc.fixed_inputs[name] = {spec_from_json(t.at("spec")),
                                   t.at("values").get<std::vector<double>>()};
      tc.notes = c.value("notes", std::vector<std::string>{});
      suite.cases.push_back(std::move(tc));
    }
    suite.validate();
    return suite;
  });
}

// ---- metrics --------------------------------------------------------------

inline Json to_json(const MetricSeries& m) {
  return {{"case_id", m.case_id},
          {"effectiveness", m.effectiveness},
          {"input_diversity", m.input_diversity},
          {"output_diversity", m.output_diversity}};
}

inline MetricSeries metric_from_json(const Json& j) {
  return decode("metric series", [&] {
    MetricSeries m;
    m.case_id = j.at("case_id").get<std::string>();
    m.effectiveness = j.at("effectiveness").get<std::vector<double>>();
    m.input_diversity = j.at("input_diversity").get<std::vector<double>>();
    m.output_diversity = j.at("output_diversity").get<std::vector<double>>();
    m.validate();
    return m;
  });
}

// ---- qubo -----------------------------------------------------------------

inline Json to_json(const Weights& w) {
  return {{"w_ef", w.w_ef},     {"w_id", w.w_id},
          {"w_od", w.w_od},     {"w_num", w.w_num},
          {"penalty", w.penalty}, {"d_min", w.d_min}};
}

inline Weights weights_from_json(const Json& j) {
  return decode("weights", [&] {
    Weights w;
    w.w_ef = j.value("w_ef", w.w_ef);
    w.w_id = j.value("w_id", w.w_id);
    w.w_od = j.value("w_od", w.w_od);
    w.w_num = j.value("w_num", w.w_num);
    w.penalty = j.value("penalty", w.penalty);
    w.d_min = j.value("d_min", w.d_min);
    w.validate();
    return w;
  });
}

inline Json to_json(const Qubo& q) {
  Json quad = Json::array();
  q.for_each_quadratic([&](std::size_t i, std::size_t j, double v) {
    quad.push_back(Json::array({i, j, v}));
  });
  return {{"n", q.size()},
          {"linear", std::vector<double>(q.linear_terms().begin(),
                                         q.linear_terms().end())},
          {"quadratic", quad},
          {"offset", q.offset()}};
}

inline Qubo qubo_from_json(const Json& j) {
  return decode("qubo", [&] {
    const auto n = j.at("n").get<std::size_t>();
    Qubo q(n);
    const auto lin = j.at("linear").get<std::vector<double>>();
    if (lin.size() != n) throw ShapeError("qubo linear array has wrong length");
    for (std::size_t i = 0; i < n; ++i) q.set_linear(i, lin[i]);
    for (const Json& t : j.at("quadratic")) {
      const auto i = t.at(0).get<std::size_t>();
      const auto k = t.at(1).get<std::size_t>();
      if (i >= k) throw ShapeError("qubo quadratic keys need i < j");
      q.add_quadratic(i, k, t.at(2).get<double>());
    }
    q.set_offset(j.value("offset", 0.0));
    return q;
  });
}

inline Json to_json(const Selection& s) {
  std::vector<int> bits(s.bits.begin(), s.bits.end());
  return bits;
}

inline Selection selection_from_json(const Json& j) {
  return decode("selection", [&] {
    Selection s;
    for (const Json& b : j) {
      const int v = b.get<int>();
      if (v != 0 && v != 1) throw ShapeError("selection bits must be 0 or 1");
      s.bits.push_back(static_cast<std::uint8_t>(v));
    }
    return s;
  });
}

inline Json to_json(const SampleSet& set) {
  Json samples = Json::array();
  for (const Sample& s : set.samples)
    samples.push_back({{"bits", to_json(s.selection)},
                       {"energy", s.energy},
                       {"occurrences", s.occurrences}});
  return {{"solver_name", set.solver_name},
          {"samples", samples},
          {"wall_time", set.wall_time},
          {"solver_time", set.solver_time}};
}

// ---- decomposition and mutation ------------------------------------------

inline Json to_json(const SubProblemPlan& p) {
  return {{"slice_index", p.slice_index},
          {"window", {p.lo, p.hi}},
          {"sampled_indices", p.sampled_indices}};
}

inline Json to_json(const MutationPlan& p) {
  Json pts = Json::array();
  for (const MutationPoint& m : p.points)
    pts.push_back({{"index", m.index},
                   {"correlation", m.correlation},
                   {"original", m.original},
                   {"mutated_value", m.mutated_value}});
  return {{"case_id", p.case_id},
          {"smoothing_radius", p.smoothing_radius},
          {"points", pts}};
}

// ---- faults ---------------------------------------------------------------

inline Json to_json(const FaultSpec& f) {
  Json j = {{"id", f.id}, {"operator", operator_name(f.op)}};
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, DelayFault>) {
          j["k"] = o.k;
        } else if constexpr (std::is_same_v<T, NoiseFault>) {
          j["sigma"] = o.sigma;
          j["seed"] = o.seed;
        } else if constexpr (std::is_same_v<T, ValueDropFault>) {
          j["begin"] = o.begin;
          j["end"] = o.end;
          j["held"] = o.held ? Json(*o.held) : Json(nullptr);
        } else if constexpr (std::is_same_v<T, ArithmeticFault>) {
          static const char* ops[] = {"scale", "offset", "negate"};
          j["param"] = o.param;
          j["op"] = ops[static_cast<int>(o.op)];
          j["operand"] = o.operand;
        } else {
          j["site"] = o.site == ClampSite::kLower ? "lower" : "upper";
          j["comparison"] = to_string(o.op);
        }
      },
      f.op);
  return j;
}

inline FaultSpec fault_from_json(const Json& j) {
  return decode("fault spec", [&] {
    FaultSpec f;
    f.id = j.at("id").get<std::string>();
    const auto op = j.at("operator").get<std::string>();
    if (op == "delay") {
      f.op = DelayFault{j.at("k").get<std::size_t>()};
    } else if (op == "noise") {
      f.op = NoiseFault{j.at("sigma").get<double>(),
                        j.value("seed", std::uint64_t{0})};
    } else if (op == "value_drop") {
      ValueDropFault d{j.at("begin").get<std::size_t>(),
                       j.at("end").get<std::size_t>(),
                       {}};
      if (j.contains("held") && !j.at("held").is_null())
        d.held = j.at("held").get<double>();
      f.op = d;
    } else if (op == "arithmetic_replacement") {
      const auto name = j.value("op", std::string("scale"));
      ArithmeticOp a = name == "scale"    ? ArithmeticOp::kScale
                       : name == "offset" ? ArithmeticOp::kOffset
                       : name == "negate"
                           ? ArithmeticOp::kNegate
                           : throw ConfigurationError(
                                 "unknown arithmetic op '" + name + "'");
      f.op = ArithmeticFault{j.value("param", std::string("gain")), a,
                             j.value("operand", 1.0)};
    } else if (op == "logical_replacement") {
      const auto site = j.at("site").get<std::string>();
      if (site != "lower" && site != "upper")
        throw ConfigurationError("unknown clamp site '" + site + "'");
      f.op = LogicalFault{site == "lower" ? ClampSite::kLower
                                          : ClampSite::kUpper,
                          parse_comparison(j.at("comparison").get<std::string>())};
    } else {
      throw ConfigurationError("unknown fault operator '" + op + "'");
    }
    return f;
  });
}

}  // namespace qamut
