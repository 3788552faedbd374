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

// qamut command-line tool.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qamut/qamut.hpp"

namespace fs = std::filesystem;
using namespace qamut;

namespace {

std::atomic<bool> g_stop{false};

// "5..100" (step 5), "5..100:10" or "4,8,12".
std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stoul(tok));
    } else {
      const std::size_t lo = std::stoul(s.substr(0, dots));
      std::string rest = s.substr(dots + 2);
      std::size_t step = 5;
      if (const auto colon = rest.find(':'); colon != std::string::npos) {
        step = std::stoul(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
      }
      const std::size_t hi = std::stoul(rest);
      if (step == 0 || lo > hi) throw std::invalid_argument("range");
      for (std::size_t n = lo; n <= hi; n += step) out.push_back(n);
    }
  } catch (const std::logic_error&) {
    throw ConfigurationError("cannot parse sizes '" + s + "'");
  }
  if (out.empty()) throw ConfigurationError("no sizes given");
  return out;
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string spec, out;
  std::size_t size = 50, points = 10;
  std::uint64_t seed = 0;
};

void run_generate(const GenerateArgs& a) {
  const SignalSpec spec = spec_from_json(read_json_file(a.spec));
  Rng rng(a.seed);
  const TestSuite suite = generate_suite(spec, a.size, a.points, rng);
  write_json_file(a.out, to_json(suite));
  std::cout << "wrote " << suite.size() << " cases to " << a.out << "\n";
}

// ---- metrics ------------------------------------------------------------------

struct MetricsArgs {
  std::string suite, model = "engine_map", out, tables;
  double fault_gain = 1.5;
  std::size_t radius = 50;
};

void run_metrics(const MetricsArgs& a) {
  const TestSuite suite = suite_from_json(read_json_file(a.suite));
  const PlantModel ref = make_model(parse_plant_kind(a.model));
  const PlantModel impl = apply_fault(
      ref, {"metric-fault",
            ArithmeticFault{"gain", ArithmeticOp::kScale, a.fault_gain}});
  const auto observed = simulate_suite(impl, suite);
  const auto expected = simulate_suite(ref, suite);
  const auto metrics = compute_metrics(suite, observed, expected, a.radius);
  Json series = Json::array();
  for (const MetricSeries& m : metrics) series.push_back(to_json(m));
  write_json_file(a.out, {{"suite", a.suite},
                          {"spec", to_json(suite.cases.front().input.spec)},
                          {"model", to_string(ref.kind)},
                          {"fault_gain_scale", a.fault_gain},
                          {"radius", a.radius},
                          {"series", series}});
  if (!a.tables.empty())
    for (const MetricSeries& m : metrics) {
      std::ostringstream os;
      write_metric_table(os, m);
      write_text_file(fs::path(a.tables) / (m.case_id + ".tsv"), os.str());
    }
  std::cout << "wrote metrics for " << metrics.size() << " cases to " << a.out
            << "\n";
}

// ---- select -------------------------------------------------------------------

struct SelectArgs {
  std::string metrics, heuristic = "sa", weights, out, endpoint;
  std::size_t m = 8, n = 40;
  double coverage = 0.5;
  bool whole = false;
  std::uint64_t seed = 0;
  AnnealParams anneal{100, 1000, 10.0, 0.05, 0};
  std::size_t population = 20, generations = 100, draws = 100, reads = 100;
  double timeout = 30.0;
};

Sampler make_sampler(const SelectArgs& a, std::uint64_t tag) {
  auto calls = std::make_shared<std::uint64_t>(0);
  const std::string& h = a.heuristic;
  if (h == "exact") return [](const Qubo& q) { return solve_exact(q); };
  if (h == "sa")
    return [a, tag, calls](const Qubo& q) {
      AnnealParams p = a.anneal;
      p.seed = derive_seed(tag, {(*calls)++});
      return solve_sa(q, p);
    };
  if (h == "evo")
    return [a, tag, calls](const Qubo& q) {
      Rng rng(derive_seed(tag, {(*calls)++}));
      return solve_evolutionary(q, a.population, a.generations, rng);
    };
  if (h == "random")
    return [a, tag, calls](const Qubo& q) {
      Rng rng(derive_seed(tag, {(*calls)++}));
      return solve_random(q, a.draws, rng);
    };
  if (h == "remote") {
    const RemoteEndpoint ep = RemoteEndpoint::parse(a.endpoint);
    return [a, ep](const Qubo& q) {
      return submit_remote(q, a.reads, ep, a.timeout);
    };
  }
  throw ConfigurationError("unknown heuristic '" + h + "'");
}

void run_select(const SelectArgs& a) {
  const Json doc = read_json_file(a.metrics);
  const SignalSpec spec = spec_from_json(doc.at("spec"));
  const Weights w =
      a.weights.empty() ? Weights{} : weights_from_json(read_json_file(a.weights));
  const auto times = sample_times(spec);
  if (a.heuristic == "remote" && a.endpoint.empty())
    throw ConfigurationError("--endpoint is required for the remote heuristic");

  Json cases = Json::array();
  std::size_t total = 0;
  std::uint64_t k = 0;
  for (const Json& j : doc.at("series")) {
    const MetricSeries m = metric_from_json(j);
    const std::uint64_t tag = derive_seed(a.seed, {k++});
    const Sampler s = make_sampler(a, tag);
    std::vector<std::size_t> chosen;
    Json plans = Json::array();
    if (a.whole) {
      chosen = select_whole(m, w, times, s);
    } else {
      DecompositionConfig d{a.m, a.n, a.coverage, tag, 0};
      std::vector<SubProblemPlan> used;
      chosen = select_points(m, w, times, d, s, nullptr, &used);
      for (const SubProblemPlan& p : used) plans.push_back(to_json(p));
    }
    total += chosen.size();
    cases.push_back({{"case_id", m.case_id}, {"indices", chosen}, {"plans", plans}});
  }
  write_json_file(a.out, {{"metrics", a.metrics},
                          {"heuristic", a.heuristic},
                          {"seed", a.seed},
                          {"weights", to_json(w)},
                          {"whole_trajectory", a.whole},
                          {"decomposition",
                           {{"m", a.m}, {"n", a.n}, {"coverage", a.coverage}}},
                          {"cases", cases}});
  std::cout << "selected " << total << " data points over " << cases.size()
            << " cases; wrote " << a.out << "\n";
}

// ---- mutate -------------------------------------------------------------------

struct MutateArgs {
  std::string suite, selection, metrics, out;
  std::size_t radius = 50, smoothing = 100;
};

void run_mutate(const MutateArgs& a) {
  const TestSuite suite = suite_from_json(read_json_file(a.suite));
  const Json sel = read_json_file(a.selection);
  const std::string metrics_path =
      a.metrics.empty() ? sel.at("metrics").get<std::string>() : a.metrics;
  const Json mdoc = read_json_file(metrics_path);
  const double d_min = weights_from_json(sel.at("weights")).d_min;

  std::map<std::string, MetricSeries> metrics;
  for (const Json& j : mdoc.at("series")) {
    MetricSeries m = metric_from_json(j);
    metrics.emplace(m.case_id, std::move(m));
  }
  std::map<std::string, std::vector<std::size_t>> chosen;
  for (const Json& c : sel.at("cases"))
    chosen[c.at("case_id").get<std::string>()] =
        c.at("indices").get<std::vector<std::size_t>>();

  TestSuite out;
  std::vector<MutationPlan> plans;
  for (const TestCase& tc : suite.cases) {
    auto it = chosen.find(tc.id);
    if (it == chosen.end() || it->second.empty()) continue;
    auto mit = metrics.find(tc.id);
    if (mit == metrics.end())
      throw SpecificationError("no metrics for case '" + tc.id + "'");
    MutationPlan plan =
        plan_mutations(tc, it->second, mit->second, a.radius, a.smoothing, d_min);
    if (plan.points.empty()) continue;
    TestCase m = apply_mutations(tc, plan);
    m.id = tc.id + "-m";
    out.cases.push_back(std::move(m));
    plans.push_back(std::move(plan));
  }
  if (out.cases.empty()) {
    std::cout << "no case had selected points; nothing written\n";
    return;
  }
  write_json_file(a.out, to_json(out));
  std::ostringstream os;
  write_plan_table(os, plans);
  fs::path plan_path = fs::path(a.out).replace_extension(".plan.tsv");
  write_text_file(plan_path, os.str());
  std::cout << "wrote " << out.size() << " mutated cases to " << a.out
            << " and the plan to " << plan_path.string() << "\n";
}

// ---- campaign, embed-study, mock-server ---------------------------------------

void run_campaign_cmd(const std::string& config, const std::string& out) {
  const CampaignConfig cfg = campaign_config_from_json(read_json_file(config));
  const ExperimentReport rep = run_campaign(cfg);
  write_report(rep, out);
  for (const CellResult& c : rep.cells)
    if (c.error)
      std::cerr << to_string(c.heuristic) << " repeat " << c.repeat
                << " failed: " << *c.error << "\n";
  std::cout << std::ifstream(fs::path(out) / "summary.tsv").rdbuf();
}

void run_embed_study(const std::string& sizes, const std::string& out) {
  const auto rows = embedding_study(parse_sizes(sizes));
  std::ostringstream os;
  write_embedding_study(os, rows);
  if (out.empty() || out == "-") {
    std::cout << os.str();
  } else {
    write_text_file(out, os.str());
    std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  }
}

void run_mock_server(int port, const std::string& backend, bool corrupt,
                     std::size_t sweeps) {
  MockSamplerServer::Options o;
  o.port = port;
  o.corrupt = corrupt;
  o.sweeps = sweeps;
  if (backend == "exact") {
    o.backend = MockSamplerServer::Backend::kExact;
  } else if (backend == "sa") {
    o.backend = MockSamplerServer::Backend::kAnnealing;
  } else {
    throw ConfigurationError("unknown backend '" + backend + "'");
  }
  MockSamplerServer server(o);
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  std::cout << "mock sampler listening on " << server.endpoint().str()
            << std::endl;
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QUBO-guided test generation for cyber-physical systems"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "generate a seed test suite");
  g->add_option("--spec", gen.spec, "signal spec JSON")->required()->check(CLI::ExistingFile);
  g->add_option("--size", gen.size, "number of test cases")->capture_default_str();
  g->add_option("--points", gen.points, "control points per case")->capture_default_str();
  g->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  g->add_option("--out", gen.out, "output suite JSON")->required();

  MetricsArgs met;
  auto* m = app.add_subcommand("metrics", "compute per-data-point metrics");
  m->add_option("--suite", met.suite, "suite JSON")->required()->check(CLI::ExistingFile);
  m->add_option("--model", met.model, "engine_map or first_order_tracker")->capture_default_str();
  m->add_option("--fault-gain", met.fault_gain,
                "gain scale of the observed implementation")->capture_default_str();
  m->add_option("--radius", met.radius, "diversity window radius (samples)")->capture_default_str();
  m->add_option("--tables", met.tables, "directory for per-case TSV tables");
  m->add_option("--out", met.out, "output metrics JSON")->required();

  SelectArgs sel;
  auto* s = app.add_subcommand("select", "select data points to mutate");
  s->add_option("--metrics", sel.metrics, "metrics JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--heuristic", sel.heuristic, "exact, sa, evo, random or remote")
      ->check(CLI::IsMember({"exact", "sa", "evo", "random", "remote"}))
      ->capture_default_str();
  s->add_option("--m", sel.m, "number of windows")->capture_default_str();
  s->add_option("--n", sel.n, "data points per sub-problem")->capture_default_str();
  s->add_option("--coverage", sel.coverage, "per-window coverage")->capture_default_str();
  s->add_flag("--whole", sel.whole, "solve the whole trajectory at once");
  s->add_option("--weights", sel.weights, "weights JSON")->check(CLI::ExistingFile);
  s->add_option("--seed", sel.seed, "random seed")->capture_default_str();
  s->add_option("--reads", sel.anneal.num_reads, "annealing reads")->capture_default_str();
  s->add_option("--sweeps", sel.anneal.sweeps, "annealing sweeps")->capture_default_str();
  s->add_option("--endpoint", sel.endpoint, "remote sampler host:port");
  s->add_option("--timeout", sel.timeout, "remote timeout (s)")->capture_default_str();
  s->add_option("--out", sel.out, "output selection JSON")->required();

  MutateArgs mut;
  auto* u = app.add_subcommand("mutate", "mutate selected data points");
  u->add_option("--suite", mut.suite, "suite JSON")->required()->check(CLI::ExistingFile);
  u->add_option("--selection", mut.selection, "selection JSON")->required()->check(CLI::ExistingFile);
  u->add_option("--metrics", mut.metrics, "metrics JSON (default: the one the selection names)");
  u->add_option("--radius", mut.radius, "correlation window radius")->capture_default_str();
  u->add_option("--smoothing", mut.smoothing, "smoothing radius")->capture_default_str();
  u->add_option("--out", mut.out, "output suite JSON of mutated cases")->required();

  std::string config, report_dir;
  auto* c = app.add_subcommand("campaign", "run a full experiment campaign");
  c->add_option("--config", config, "campaign config JSON")->required()->check(CLI::ExistingFile);
  c->add_option("--out", report_dir, "report directory")->required();

  std::string sizes = "5..100", table;
  auto* e = app.add_subcommand("embed-study", "physical qubits per problem size");
  e->add_option("--sizes", sizes, "a..b[:step] or a comma list")->capture_default_str();
  e->add_option("--out", table, "output TSV (default stdout)");

  int port = 0;
  std::string backend = "exact";
  bool corrupt = false;
  std::size_t sweeps = 200;
  auto* k = app.add_subcommand("mock-server", "serve the sampling protocol locally");
  k->add_option("--port", port, "port (0 picks one)")->capture_default_str();
  k->add_option("--backend", backend, "exact or sa")->capture_default_str();
  k->add_option("--sweeps", sweeps, "annealing sweeps")->capture_default_str();
  k->add_flag("--corrupt", corrupt, "report a wrong energy for the first sample");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*g) run_generate(gen);
    if (*m) run_metrics(met);
    if (*s) run_select(sel);
    if (*u) run_mutate(mut);
    if (*c) run_campaign_cmd(config, report_dir);
    if (*e) run_embed_study(sizes, table);
    if (*k) run_mock_server(port, backend, corrupt, sweeps);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
