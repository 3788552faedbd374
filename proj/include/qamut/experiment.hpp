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

// Campaign runner: generate seed suites, pick data points with each
// heuristic, mutate, and measure how many injected faults the enriched
// suites detect.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qamut/decompose.hpp"
#include "qamut/embed.hpp"
#include "qamut/error.hpp"
#include "qamut/io.hpp"
#include "qamut/metrics.hpp"
#include "qamut/mutate.hpp"
#include "qamut/qubo.hpp"
#include "qamut/random.hpp"
#include "qamut/remote.hpp"
#include "qamut/samplers.hpp"
#include "qamut/sut.hpp"
#include "qamut/trajectory.hpp"

namespace qamut {

// ---- statistics -------------------------------------------------------------

// Linear-interpolation quantile (the common "type 7" definition).
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw InsufficientDataError("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

// Two-sided Mann-Whitney U test using the normal approximation with tie and
// continuity corrections. All-tied samples give p = 1.
inline double rank_sum_test(std::span<const double> a,
                            std::span<const double> b) {
  if (a.size() < 3 || b.size() < 3)
    throw InsufficientDataError("rank-sum test needs three values per sample");
  struct Item {
    double v;
    bool first;
  };
  std::vector<Item> all;
  for (double x : a) all.push_back({x, true});
  for (double x : b) all.push_back({x, false});
  std::sort(all.begin(), all.end(),
            [](const Item& p, const Item& q) { return p.v < q.v; });
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  double r1 = 0.0, ties = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].v == all[i].v) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    for (std::size_t k = i; k < j; ++k)
      if (all[k].first) r1 += rank;
    i = j;
  }
  const double u1 = r1 - n1 * (n1 + 1.0) / 2.0;
  const double mu = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double z = (std::abs(u1 - mu) - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

// ---- configuration ------------------------------------------------------------

enum class Heuristic { kQuantumRemote, kSimulatedAnnealing, kEvolutionary, kRandom };

inline std::string to_string(Heuristic h) {
  switch (h) {
    case Heuristic::kQuantumRemote: return "quantum_remote";
    case Heuristic::kSimulatedAnnealing: return "simulated_annealing";
    case Heuristic::kEvolutionary: return "evolutionary";
    case Heuristic::kRandom: return "random";
  }
  return "?";
}

inline Heuristic parse_heuristic(const std::string& s) {
  for (Heuristic h : {Heuristic::kQuantumRemote, Heuristic::kSimulatedAnnealing,
                      Heuristic::kEvolutionary, Heuristic::kRandom})
    if (to_string(h) == s) return h;
  if (s == "remote" || s == "quantum") return Heuristic::kQuantumRemote;
  if (s == "sa") return Heuristic::kSimulatedAnnealing;
  if (s == "evo") return Heuristic::kEvolutionary;
  throw ConfigurationError("unknown heuristic '" + s + "'");
}

struct CampaignConfig {
  SignalSpec input{"pedal", 0.0, 1.0, 0.5, 10.0, 0.01};
  PlantKind plant = PlantKind::kEngineMap;
  // Implementation under observation when computing effectiveness: the
  // reference plant with its gain scaled by this factor.
  double metric_fault_gain_scale = 1.5;
  std::size_t suite_size = 50;
  std::size_t control_points = 10;
  std::size_t suite_cap = 50;
  Weights weights;
  DecompositionConfig decomposition;
  std::vector<Heuristic> heuristics{Heuristic::kSimulatedAnnealing,
                                    Heuristic::kEvolutionary,
                                    Heuristic::kRandom};
  std::size_t repeats = 10;
  double epsilon = 0.1;
  std::uint64_t seed = 1;
  std::size_t diversity_radius = 50;
  std::size_t correlation_radius = 50;
  std::size_t smoothing_radius = 100;
  std::size_t faults_per_operator = 10;
  AnnealParams anneal{6, 150, 10.0, 0.05, 0};
  std::size_t population = 20;
  std::size_t generations = 100;
  std::size_t random_draws = 100;
  std::size_t remote_reads = 20;
  std::string remote_endpoint;  // empty: start a local mock service
  double remote_timeout = 30.0;

  void validate() const {
    input.validate();
    weights.validate();
    decomposition.validate();
    if (heuristics.empty())
      throw ConfigurationError("campaign needs at least one heuristic");
    if (repeats < 1) throw ConfigurationError("repeats must be >= 1");
    if (suite_size < 2)
      throw ConfigurationError("suite_size must be >= 2 for diversity");
    if (suite_cap < 1) throw ConfigurationError("suite_cap must be >= 1");
    if (!(epsilon >= 0.0)) throw ConfigurationError("epsilon must be >= 0");
    if (faults_per_operator < 1)
      throw ConfigurationError("faults_per_operator must be >= 1");
    AnnealParams a = anneal;
    a.validate();
    if (population < 2) throw ConfigurationError("population must be >= 2");
    if (random_draws < 1) throw ConfigurationError("random_draws must be >= 1");
  }
};

inline Json to_json(const CampaignConfig& c) {
  std::vector<std::string> hs;
  for (Heuristic h : c.heuristics) hs.push_back(to_string(h));
  return {{"input", to_json(c.input)},
          {"plant", to_string(c.plant)},
          {"metric_fault_gain_scale", c.metric_fault_gain_scale},
          {"suite_size", c.suite_size},
          {"control_points", c.control_points},
          {"suite_cap", c.suite_cap},
          {"weights", to_json(c.weights)},
          {"decomposition",
           {{"m", c.decomposition.m},
            {"n", c.decomposition.n},
            {"coverage", c.decomposition.coverage},
            {"merge_capacity", c.decomposition.merge_capacity}}},
          {"heuristics", hs},
          {"repeats", c.repeats},
          {"epsilon", c.epsilon},
          {"seed", c.seed},
          {"diversity_radius", c.diversity_radius},
          {"correlation_radius", c.correlation_radius},
          {"smoothing_radius", c.smoothing_radius},
          {"faults_per_operator", c.faults_per_operator},
          {"anneal",
           {{"num_reads", c.anneal.num_reads},
            {"sweeps", c.anneal.sweeps},
            {"initial_temperature", c.anneal.initial_temperature},
            {"final_temperature", c.anneal.final_temperature}}},
          {"evolutionary",
           {{"population", c.population}, {"generations", c.generations}}},
          {"random_draws", c.random_draws},
          {"remote",
           {{"endpoint", c.remote_endpoint},
            {"reads", c.remote_reads},
            {"timeout", c.remote_timeout}}}};
}

// Missing keys keep their defaults.
inline CampaignConfig campaign_config_from_json(const Json& j) {
  return decode("campaign config", [&] {
    CampaignConfig c;
    if (j.contains("input")) c.input = spec_from_json(j.at("input"));
    if (j.contains("plant"))
      c.plant = parse_plant_kind(j.at("plant").get<std::string>());
    c.metric_fault_gain_scale =
        j.value("metric_fault_gain_scale", c.metric_fault_gain_scale);
    c.suite_size = j.value("suite_size", c.suite_size);
    c.control_points = j.value("control_points", c.control_points);
    c.suite_cap = j.value("suite_cap", c.suite_cap);
    if (j.contains("weights")) c.weights = weights_from_json(j.at("weights"));
    if (j.contains("decomposition")) {
      const Json& d = j.at("decomposition");
      c.decomposition.m = d.value("m", c.decomposition.m);
      c.decomposition.n = d.value("n", c.decomposition.n);
      c.decomposition.coverage = d.value("coverage", c.decomposition.coverage);
      c.decomposition.merge_capacity =
          d.value("merge_capacity", c.decomposition.merge_capacity);
    }
    if (j.contains("heuristics")) {
      c.heuristics.clear();
      for (const Json& h : j.at("heuristics"))
        c.heuristics.push_back(parse_heuristic(h.get<std::string>()));
    }
    c.repeats = j.value("repeats", c.repeats);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.seed = j.value("seed", c.seed);
    c.diversity_radius = j.value("diversity_radius", c.diversity_radius);
    c.correlation_radius = j.value("correlation_radius", c.correlation_radius);
    c.smoothing_radius = j.value("smoothing_radius", c.smoothing_radius);
    c.faults_per_operator =
        j.value("faults_per_operator", c.faults_per_operator);
    if (j.contains("anneal")) {
      const Json& a = j.at("anneal");
      c.anneal.num_reads = a.value("num_reads", c.anneal.num_reads);
      c.anneal.sweeps = a.value("sweeps", c.anneal.sweeps);
      c.anneal.initial_temperature =
          a.value("initial_temperature", c.anneal.initial_temperature);
      c.anneal.final_temperature =
          a.value("final_temperature", c.anneal.final_temperature);
    }
    if (j.contains("evolutionary")) {
      c.population = j.at("evolutionary").value("population", c.population);
      c.generations = j.at("evolutionary").value("generations", c.generations);
    }
    c.random_draws = j.value("random_draws", c.random_draws);
    if (j.contains("remote")) {
      const Json& r = j.at("remote");
      c.remote_endpoint = r.value("endpoint", c.remote_endpoint);
      c.remote_reads = r.value("reads", c.remote_reads);
      c.remote_timeout = r.value("timeout", c.remote_timeout);
    }
    c.validate();
    return c;
  });
}

// ---- fault detection --------------------------------------------------------

// Outputs of the reference model for every case, computed once.
inline std::vector<Trajectory> simulate_suite(const PlantModel& m,
                                              const TestSuite& suite) {
  std::vector<Trajectory> out;
  out.reserve(suite.size());
  for (const TestCase& c : suite.cases) out.push_back(simulate(m, c));
  return out;
}

// detected[f] is true when some case fails the epsilon oracle against
// variant f.
inline std::vector<bool> detection_vector(const TestSuite& suite,
                                          std::span<const PlantModel> variants,
                                          std::span<const Trajectory> expected,
                                          double epsilon) {
  std::vector<bool> detected(variants.size(), false);
  for (std::size_t f = 0; f < variants.size(); ++f)
    for (std::size_t c = 0; c < suite.size() && !detected[f]; ++c)
      detected[f] =
          !conformance(simulate(variants[f], suite.cases[c]), expected[c],
                       epsilon)
               .pass;
  return detected;
}

inline double pfd(const TestSuite& suite, std::span<const PlantModel> variants,
                  const PlantModel& reference, double epsilon) {
  if (variants.empty()) throw ConfigurationError("empty fault corpus");
  if (suite.size() == 0) throw ConfigurationError("empty test suite");
  const auto expected = simulate_suite(reference, suite);
  const auto d = detection_vector(suite, variants, expected, epsilon);
  const auto hits = static_cast<double>(std::count(d.begin(), d.end(), true));
  return 100.0 * hits / static_cast<double>(variants.size());
}

// ---- timing -----------------------------------------------------------------

// Integer-nanosecond splits. Laps telescope, so the splits always add up to
// the total.
struct Timings {
  std::int64_t metrics = 0, solve = 0, mutate = 0, embed = 0, access = 0;
  std::int64_t total() const { return metrics + solve + mutate + embed + access; }
};

class LapTimer {
 public:
  using Clock = std::chrono::steady_clock;
  LapTimer() : last_(Clock::now()) {}
  std::int64_t lap() {
    const auto now = Clock::now();
    const auto ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(now - last_)
            .count();
    last_ = now;
    return ns;
  }

 private:
  Clock::time_point last_;
};

inline double seconds(std::int64_t ns) { return static_cast<double>(ns) * 1e-9; }

// ---- campaign -----------------------------------------------------------------

struct CellResult {
  Heuristic heuristic;
  std::size_t repeat = 0;
  std::optional<std::string> error;
  double pfd = 0.0;
  std::vector<bool> detected;  // per fault
  std::size_t suite_size = 0;
  std::size_t mutated_cases = 0;
  std::size_t selected_points = 0;
  double median_case_max_effectiveness = 0.0;
  std::size_t solver_calls = 0;
  std::size_t largest_qubo = 0;
  std::size_t qubo_warnings = 0;
  Timings timings;
};

struct SeedResult {
  std::size_t repeat = 0;
  double pfd = 0.0;
  double median_case_max_effectiveness = 0.0;
};

struct HeuristicSummary {
  Heuristic heuristic;
  std::size_t completed = 0;
  double pfd_median = 0.0, pfd_q1 = 0.0, pfd_q3 = 0.0;
  double effectiveness_median = 0.0;
};

struct PairwiseTest {
  Heuristic a, b;
  std::optional<double> p_value;  // absent with fewer than 3 repeats
};

struct ExperimentReport {
  CampaignConfig config;
  std::vector<FaultSpec> faults;
  std::vector<SeedResult> seeds;
  std::vector<CellResult> cells;  // heuristic-major, then repeat
  std::vector<HeuristicSummary> summary;
  std::vector<PairwiseTest> pairwise;

  // matrix[f][h]: repeats of heuristic h whose suite detected fault f.
  std::vector<std::vector<std::size_t>> detection_matrix() const {
    std::vector<std::vector<std::size_t>> m(
        faults.size(), std::vector<std::size_t>(config.heuristics.size(), 0));
    for (const CellResult& c : cells) {
      if (c.error) continue;
      const auto h = static_cast<std::size_t>(
          std::find(config.heuristics.begin(), config.heuristics.end(),
                    c.heuristic) -
          config.heuristics.begin());
      for (std::size_t f = 0; f < c.detected.size(); ++f)
        if (c.detected[f]) ++m[f][h];
    }
    return m;
  }

  std::vector<double> pfds(Heuristic h) const {
    std::vector<double> v;
    for (const CellResult& c : cells)
      if (c.heuristic == h && !c.error) v.push_back(c.pfd);
    return v;
  }
};

// Per-case maximum effectiveness, then the median over cases.
inline double median_case_max(std::span<const MetricSeries> metrics) {
  std::vector<double> v;
  for (const MetricSeries& m : metrics)
    v.push_back(m.effectiveness.empty()
                    ? 0.0
                    : *std::max_element(m.effectiveness.begin(),
                                        m.effectiveness.end()));
  return v.empty() ? 0.0 : median(std::move(v));
}

// Seed cases plus their mutants, cut to `cap` cases by largest summed
// effectiveness (ties by id), then restored to insertion order.
inline TestSuite enrich_suite(const TestSuite& seeds,
                              std::span<const TestCase> mutants,
                              std::span<const double> effectiveness_sums,
                              std::size_t cap) {
  std::vector<TestCase> all = seeds.cases;
  all.insert(all.end(), mutants.begin(), mutants.end());
  if (effectiveness_sums.size() != all.size())
    throw ShapeError("one effectiveness sum per case required");
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (effectiveness_sums[a] != effectiveness_sums[b])
      return effectiveness_sums[a] > effectiveness_sums[b];
    return all[a].id < all[b].id;
  });
  order.resize(std::min(cap, order.size()));
  std::sort(order.begin(), order.end());
  TestSuite out;
  for (std::size_t i : order) out.cases.push_back(all[i]);
  return out;
}

namespace detail {

struct RepeatContext {
  std::size_t repeat;
  TestSuite seeds;
  std::vector<MetricSeries> metrics;
  std::int64_t metrics_ns = 0;
};

inline double sum(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

class CampaignRunner {
 public:
  explicit CampaignRunner(const CampaignConfig& cfg)
      : cfg_(cfg),
        reference_(make_model(cfg.plant)),
        metric_fault_(apply_fault(
            reference_, {"metric-fault", ArithmeticFault{"gain", ArithmeticOp::kScale,
                                                          cfg.metric_fault_gain_scale}})),
        times_(sample_times(cfg.input)) {}

  ExperimentReport run() {
    cfg_.validate();
    ExperimentReport rep;
    rep.config = cfg_;
    rep.faults = fault_corpus(reference_, cfg_.input, cfg_.faults_per_operator,
                              derive_seed(cfg_.seed, {0xfa}));
    for (const FaultSpec& f : rep.faults)
      variants_.push_back(apply_fault(reference_, f));
    start_remote_if_needed();

    std::vector<RepeatContext> repeats;
    for (std::size_t r = 0; r < cfg_.repeats; ++r) {
      repeats.push_back(prepare_repeat(r));
      const RepeatContext& ctx = repeats.back();
      const auto expected = simulate_suite(reference_, ctx.seeds);
      const auto d = detection_vector(ctx.seeds, variants_, expected, cfg_.epsilon);
      rep.seeds.push_back({r, percent(d), median_case_max(ctx.metrics)});
    }
    for (Heuristic h : cfg_.heuristics)
      for (const RepeatContext& ctx : repeats) rep.cells.push_back(run_cell(h, ctx));

    summarize(rep);
    return rep;
  }

 private:
  static double percent(const std::vector<bool>& d) {
    if (d.empty()) return 0.0;
    return 100.0 * static_cast<double>(std::count(d.begin(), d.end(), true)) /
           static_cast<double>(d.size());
  }

  std::vector<MetricSeries> metrics_for(const TestSuite& suite) const {
    const auto observed = simulate_suite(metric_fault_, suite);
    const auto expected = simulate_suite(reference_, suite);
    return compute_metrics(suite, observed, expected, cfg_.diversity_radius);
  }

  std::vector<double> effectiveness_sums(const TestSuite& suite) const {
    std::vector<double> out;
    for (const TestCase& c : suite.cases) {
      const Trajectory e = simulate(reference_, c);
      const auto ef = effectiveness_series(simulate(metric_fault_, c), e, e.spec);
      out.push_back(sum(ef));
    }
    return out;
  }

  RepeatContext prepare_repeat(std::size_t r) const {
    LapTimer t;
    RepeatContext ctx{r, {}, {}, 0};
    Rng rng(derive_seed(cfg_.seed, {0x5eed, r}));
    ctx.seeds = generate_suite(cfg_.input, cfg_.suite_size, cfg_.control_points, rng);
    t.lap();
    ctx.metrics = metrics_for(ctx.seeds);
    ctx.metrics_ns = t.lap();
    return ctx;
  }

  void start_remote_if_needed() {
    const bool wants = std::find(cfg_.heuristics.begin(), cfg_.heuristics.end(),
                                 Heuristic::kQuantumRemote) != cfg_.heuristics.end();
    if (!wants) return;
    if (!cfg_.remote_endpoint.empty()) {
      endpoint_ = RemoteEndpoint::parse(cfg_.remote_endpoint);
      return;
    }
    MockSamplerServer::Options o;
    o.backend = MockSamplerServer::Backend::kAnnealing;
    o.sweeps = cfg_.anneal.sweeps;
    o.seed = derive_seed(cfg_.seed, {0x7e});
    mock_ = std::make_unique<MockSamplerServer>(o);
    endpoint_ = mock_->endpoint();
  }

  // Sampler for one case of one cell. Embedding and access time are
  // accumulated into `embed_ns` / `access_ns` for the remote heuristic.
  Sampler sampler_for(Heuristic h, std::uint64_t tag, std::int64_t& embed_ns,
                      std::int64_t& access_ns) {
    auto calls = std::make_shared<std::uint64_t>(0);
    switch (h) {
      case Heuristic::kSimulatedAnnealing:
        return [this, tag, calls](const Qubo& q) {
          AnnealParams p = cfg_.anneal;
          p.seed = derive_seed(tag, {(*calls)++});
          return solve_sa(q, p);
        };
      case Heuristic::kEvolutionary:
        return [this, tag, calls](const Qubo& q) {
          Rng rng(derive_seed(tag, {(*calls)++}));
          return solve_evolutionary(q, cfg_.population, cfg_.generations, rng);
        };
      case Heuristic::kRandom:
        return [this, tag, calls](const Qubo& q) {
          Rng rng(derive_seed(tag, {(*calls)++}));
          return solve_random(q, cfg_.random_draws, rng);
        };
      case Heuristic::kQuantumRemote:
        return [this, &embed_ns, &access_ns](const Qubo& q) {
          LapTimer t;
          HardwareTopology topo = build_chimera(clique_grid_size(q.size()));
          Embedding e = embed_clique(q.size(), topo);
          if (!verify_embedding(e, q, topo).ok)
            throw SolverError("clique embedding failed verification");
          embed_ns += t.lap();
          SampleSet s = submit_with_retry(q);
          access_ns += static_cast<std::int64_t>(std::llround(s.solver_time * 1e9));
          return s;
        };
    }
    throw ConfigurationError("unhandled heuristic");
  }

  SampleSet submit_with_retry(const Qubo& q) {
    for (int attempt = 0;; ++attempt) {
      try {
        return submit_remote(q, cfg_.remote_reads, endpoint_, cfg_.remote_timeout);
      } catch (const TransportError& e) {
        if (!e.retryable() || attempt == 2) throw;
      }
    }
  }

  CellResult run_cell(Heuristic h, const RepeatContext& ctx) {
    CellResult cell;
    cell.heuristic = h;
    cell.repeat = ctx.repeat;
    LapTimer t;
    std::int64_t embed_ns = 0, access_ns = 0;
    try {
      const std::uint64_t base =
          derive_seed(cfg_.seed, {0xce11, static_cast<std::uint64_t>(h), ctx.repeat});
      std::vector<std::vector<std::size_t>> selections;
      SolveTrace trace;
      for (std::size_t i = 0; i < ctx.seeds.size(); ++i) {
        const std::uint64_t tag = derive_seed(base, {i});
        Sampler s = sampler_for(h, tag, embed_ns, access_ns);
        if (h == Heuristic::kQuantumRemote) {
          DecompositionConfig d = cfg_.decomposition;
          d.seed = tag;
          selections.push_back(select_points(ctx.metrics[i], cfg_.weights, times_,
                                             d, s, &trace));
        } else {
          selections.push_back(
              select_whole(ctx.metrics[i], cfg_.weights, times_, s, &trace));
        }
      }
      const std::int64_t solve_ns = t.lap();
      cell.timings.embed = std::min(embed_ns, solve_ns);
      cell.timings.access = std::min(access_ns, solve_ns - cell.timings.embed);
      cell.timings.solve = solve_ns - cell.timings.embed - cell.timings.access;
      cell.solver_calls = trace.calls;
      cell.largest_qubo = trace.largest_qubo;
      cell.qubo_warnings = trace.warnings.size();

      std::vector<TestCase> mutants;
      for (std::size_t i = 0; i < ctx.seeds.size(); ++i) {
        const TestCase& tc = ctx.seeds.cases[i];
        MutationPlan plan = plan_mutations(tc, selections[i], ctx.metrics[i],
                                           cfg_.correlation_radius,
                                           cfg_.smoothing_radius, cfg_.weights.d_min);
        cell.selected_points += plan.points.size();
        if (plan.points.empty()) continue;
        TestCase m = apply_mutations(tc, plan);
        m.id = tc.id + "-m";
        mutants.push_back(std::move(m));
      }
      cell.mutated_cases = mutants.size();
      std::vector<double> sums = effectiveness_sums(ctx.seeds);
      TestSuite mutant_suite{mutants};
      for (double s : effectiveness_sums(mutant_suite)) sums.push_back(s);
      TestSuite enriched = enrich_suite(ctx.seeds, mutants, sums, cfg_.suite_cap);
      cell.timings.mutate = t.lap();
      cell.timings.metrics = ctx.metrics_ns;

      cell.suite_size = enriched.size();
      const auto expected = simulate_suite(reference_, enriched);
      cell.detected = detection_vector(enriched, variants_, expected, cfg_.epsilon);
      cell.pfd = percent(cell.detected);
      cell.median_case_max_effectiveness = median_case_max(metrics_for(enriched));
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    return cell;
  }

  void summarize(ExperimentReport& rep) const {
    for (Heuristic h : cfg_.heuristics) {
      HeuristicSummary s{h, 0, 0, 0, 0, 0};
      const auto v = rep.pfds(h);
      std::vector<double> eff;
      for (const CellResult& c : rep.cells)
        if (c.heuristic == h && !c.error) eff.push_back(c.median_case_max_effectiveness);
      s.completed = v.size();
      if (!v.empty()) {
        s.pfd_median = median(v);
        s.pfd_q1 = quantile(v, 0.25);
        s.pfd_q3 = quantile(v, 0.75);
        s.effectiveness_median = median(eff);
      }
      rep.summary.push_back(s);
    }
    for (std::size_t a = 0; a < cfg_.heuristics.size(); ++a)
      for (std::size_t b = a + 1; b < cfg_.heuristics.size(); ++b) {
        PairwiseTest p{cfg_.heuristics[a], cfg_.heuristics[b], std::nullopt};
        const auto va = rep.pfds(p.a), vb = rep.pfds(p.b);
        if (va.size() >= 3 && vb.size() >= 3) p.p_value = rank_sum_test(va, vb);
        rep.pairwise.push_back(p);
      }
  }

  CampaignConfig cfg_;
  PlantModel reference_;
  PlantModel metric_fault_;
  std::vector<double> times_;
  std::vector<PlantModel> variants_;
  std::unique_ptr<MockSamplerServer> mock_;
  RemoteEndpoint endpoint_;
};

}  // namespace detail

inline ExperimentReport run_campaign(const CampaignConfig& cfg) {
  return detail::CampaignRunner(cfg).run();
}

// ---- report output ------------------------------------------------------------

inline std::string fixed(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Rounds to six decimals so JSON output does not depend on last-bit noise.
inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

inline Json report_json(const ExperimentReport& rep) {
  Json seeds = Json::array();
  for (const SeedResult& s : rep.seeds)
    seeds.push_back({{"repeat", s.repeat},
                     {"pfd", round6(s.pfd)},
                     {"median_case_max_effectiveness",
                      round6(s.median_case_max_effectiveness)}});
  Json cells = Json::array();
  for (const CellResult& c : rep.cells) {
    Json j = {{"heuristic", to_string(c.heuristic)}, {"repeat", c.repeat}};
    if (c.error) {
      j["error"] = *c.error;
    } else {
      j["pfd"] = round6(c.pfd);
      j["suite_size"] = c.suite_size;
      j["mutated_cases"] = c.mutated_cases;
      j["selected_points"] = c.selected_points;
      j["median_case_max_effectiveness"] = round6(c.median_case_max_effectiveness);
      j["solver_calls"] = c.solver_calls;
      j["largest_qubo"] = c.largest_qubo;
      j["qubo_warnings"] = c.qubo_warnings;
    }
    cells.push_back(j);
  }
  Json summary = Json::array();
  for (const HeuristicSummary& s : rep.summary)
    summary.push_back({{"heuristic", to_string(s.heuristic)},
                       {"completed", s.completed},
                       {"pfd_median", round6(s.pfd_median)},
                       {"pfd_q1", round6(s.pfd_q1)},
                       {"pfd_q3", round6(s.pfd_q3)},
                       {"effectiveness_median", round6(s.effectiveness_median)}});
  Json pairwise = Json::array();
  for (const PairwiseTest& p : rep.pairwise)
    pairwise.push_back({{"a", to_string(p.a)},
                        {"b", to_string(p.b)},
                        {"p_value", p.p_value ? Json(round6(*p.p_value)) : Json(nullptr)}});
  Json faults = Json::array();
  for (const FaultSpec& f : rep.faults) faults.push_back(to_json(f));
  return {{"config", to_json(rep.config)},
          {"faults", faults},
          {"seed_suites", seeds},
          {"cells", cells},
          {"summary", summary},
          {"pairwise", pairwise},
          {"detection_matrix", rep.detection_matrix()}};
}

// Writes report.json, summary.tsv, detection.tsv and cells/<heuristic>-r<k>.tsv,
// which depend only on the configuration and seeds, and timings.tsv, which
// does not.
inline void write_report(const ExperimentReport& rep,
                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "cells");
  write_json_file(dir / "report.json", report_json(rep));

  std::ostringstream s;
  s << "heuristic\tcompleted\tpfd_median\tpfd_q1\tpfd_q3\teffectiveness_median\n";
  for (const HeuristicSummary& h : rep.summary)
    s << to_string(h.heuristic) << '\t' << h.completed << '\t'
      << fixed(h.pfd_median, 2) << '\t' << fixed(h.pfd_q1, 2) << '\t'
      << fixed(h.pfd_q3, 2) << '\t' << fixed(h.effectiveness_median) << '\n';
  std::vector<double> seed_pfd, seed_eff;
  for (const SeedResult& r : rep.seeds) {
    seed_pfd.push_back(r.pfd);
    seed_eff.push_back(r.median_case_max_effectiveness);
  }
  if (!seed_pfd.empty())
    s << "seed_suite\t" << seed_pfd.size() << '\t' << fixed(median(seed_pfd), 2)
      << '\t' << fixed(quantile(seed_pfd, 0.25), 2) << '\t'
      << fixed(quantile(seed_pfd, 0.75), 2) << '\t' << fixed(median(seed_eff))
      << '\n';
  s << "\na\tb\tp_value\n";
  for (const PairwiseTest& p : rep.pairwise)
    s << to_string(p.a) << '\t' << to_string(p.b) << '\t'
      << (p.p_value ? fixed(*p.p_value) : std::string("NA")) << '\n';
  write_text_file(dir / "summary.tsv", s.str());

  std::ostringstream d;
  d << "fault";
  for (Heuristic h : rep.config.heuristics) d << '\t' << to_string(h);
  d << '\n';
  const auto matrix = rep.detection_matrix();
  for (std::size_t f = 0; f < rep.faults.size(); ++f) {
    d << rep.faults[f].id;
    for (std::size_t v : matrix[f]) d << '\t' << v;
    d << '\n';
  }
  write_text_file(dir / "detection.tsv", d.str());

  for (const CellResult& c : rep.cells) {
    std::ostringstream o;
    if (c.error) {
      o << "error\t" << *c.error << '\n';
    } else {
      o << "fault\toperator\tdetected\n";
      for (std::size_t f = 0; f < rep.faults.size(); ++f)
        o << rep.faults[f].id << '\t' << operator_name(rep.faults[f].op) << '\t'
          << (c.detected[f] ? 1 : 0) << '\n';
    }
    write_text_file(dir / "cells" /
                        (to_string(c.heuristic) + "-r" + std::to_string(c.repeat) + ".tsv"),
                    o.str());
  }

  std::ostringstream t;
  t << "heuristic\trepeat\ttotal\tmetrics\tsolve\tmutate\tembed\taccess\n";
  for (const CellResult& c : rep.cells) {
    const Timings& x = c.timings;
    t << to_string(c.heuristic) << '\t' << c.repeat << '\t' << fixed(seconds(x.total()))
      << '\t' << fixed(seconds(x.metrics)) << '\t' << fixed(seconds(x.solve)) << '\t'
      << fixed(seconds(x.mutate)) << '\t' << fixed(seconds(x.embed)) << '\t'
      << fixed(seconds(x.access)) << '\n';
  }
  write_text_file(dir / "timings.tsv", t.str());
}

}  // namespace qamut
