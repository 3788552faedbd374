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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   acceptance            run all criteria
//   acceptance --only 3   run criterion 3 only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qamut/qamut.hpp"
#include "support.hpp"

namespace {

using namespace qamut;
using qamut::testing::random_qubo;
using qamut::testing::random_selection;
using qamut::testing::random_values;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- 1 -------------------------------------------------------------------

Outcome worked_example() {
  const std::vector<double> v{0.31, 0.32};
  const Qubo q = build_metric_objective(v, 0.63);
  struct Row {
    std::vector<std::uint8_t> bits;
    double printed;
  };
  const Row rows[] = {{{0, 0}, 0.0}, {{1, 0}, -0.294}, {{0, 1}, -0.3},
                      {{1, 1}, -0.398}};
  bool ok = true;
  std::ostringstream os;
  for (const Row& r : rows) {
    const double e = energy(q, Selection(r.bits));
    const double d = std::abs(e - r.printed);
    ok &= d <= 5e-4;
    os << "[" << int(r.bits[0]) << int(r.bits[1]) << "] " << fmt("%.4f", e)
       << " vs " << r.printed << " (|d|=" << fmt("%.1e", d) << "); ";
  }
  const SampleSet s = solve_exact(q);
  const bool best11 = s.best().selection == Selection({1, 1});
  ok &= best11;
  os << "exact minimum " << (best11 ? "[11]" : "not [11]");
  return {ok, os.str()};
}

// ---- 2 -------------------------------------------------------------------

Outcome qubo_algebra() {
  Rng rng(2);
  double worst = 0.0;
  for (int inst = 0; inst < 1000; ++inst) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 16));
    const auto v = random_values(n, rng);
    const double target = rng.uniform(0.0, static_cast<double>(n));
    const Qubo q = build_metric_objective(v, target);
    for (int s = 0; s < 100; ++s) {
      const Selection x = random_selection(n, rng);
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += x[i] ? v[i] : 0.0;
      const double lhs = energy(q, x) + target * target;
      const double rhs = (dot - target) * (dot - target);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return {worst <= 1e-9,
          "100000 selections over 1000 instances, max |error| " +
              fmt("%.2e", worst)};
}

// ---- 3 -------------------------------------------------------------------

Outcome sampler_oracle() {
  Rng rng(3);
  int found = 0;
  double worst_below = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const Qubo q = random_qubo(16, rng);
    const double opt = solve_exact(q).best().energy;
    AnnealParams p;
    p.num_reads = 1000;
    p.sweeps = 200;
    p.seed = derive_seed(3, {static_cast<std::uint64_t>(inst)});
    const SampleSet sa = solve_sa(q, p);
    if (std::abs(sa.best().energy - opt) <= 1e-9) ++found;
    Rng evo_rng(derive_seed(31, {static_cast<std::uint64_t>(inst)}));
    Rng rnd_rng(derive_seed(32, {static_cast<std::uint64_t>(inst)}));
    const SampleSet evo = solve_evolutionary(q, 20, 50, evo_rng);
    const SampleSet rnd = solve_random(q, 200, rnd_rng);
    for (const SampleSet* s : {&sa, &evo, &rnd})
      for (const Sample& x : s->samples)
        worst_below = std::max(worst_below, opt - x.energy);
  }
  const bool none_below = worst_below <= 1e-9;
  return {found >= 90 && none_below,
          "SA optimum on " + std::to_string(found) +
              "/100; largest undercut of the exact minimum " +
              fmt("%.1e", worst_below)};
}

// ---- 4 -------------------------------------------------------------------

Outcome constraint_soundness() {
  Rng rng(4);
  Weights w;  // P = 1000, d_min = 2 s
  std::size_t minimizers = 0, violating = 0, with_near_pairs = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 14));
    std::vector<double> times;
    for (std::size_t k : rng.sample_without_replacement(1001, n))
      times.push_back(static_cast<double>(k) * 0.01);
    const auto ef = random_values(n, rng);
    const auto id = random_values(n, rng);
    const auto od = random_values(n, rng);
    const SelectionProblem p = build_selection_problem(ef, id, od, times, w);
    if (build_proximity_constraint(times, w.d_min, w.penalty).num_interactions())
      ++with_near_pairs;
    const SampleSet s = solve_exact(p.qubo);
    for (const Sample& x : s.samples) {
      if (x.energy > s.best().energy + 1e-9) break;
      ++minimizers;
      if (!satisfies_proximity(x.selection, times, w.d_min)) ++violating;
    }
  }
  return {violating == 0, std::to_string(minimizers) +
                              " exact minimizers over 200 instances (" +
                              std::to_string(with_near_pairs) +
                              " with close pairs), " +
                              std::to_string(violating) + " violate d_min"};
}

// ---- 5 -------------------------------------------------------------------

Outcome decomposition_consistency() {
  Rng rng(5);
  int equal = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(4, 16));
    MetricSeries m{"tc", random_values(n, rng), random_values(n, rng),
                   random_values(n, rng)};
    std::vector<double> times(n);
    for (std::size_t k = 0; k < n; ++k) times[k] = 0.75 * static_cast<double>(k);
    DecompositionConfig cfg{1, n, 1.0, static_cast<std::uint64_t>(inst), 0};
    const Sampler exact = [](const Qubo& q) { return solve_exact(q); };
    const auto piped = select_points(m, Weights{}, times, cfg, exact);
    const auto direct = select_whole(m, Weights{}, times, exact);
    if (piped == direct) ++equal;
  }
  return {equal == 50, std::to_string(equal) + "/50 decomposed selections equal "
                                               "the whole-problem selection"};
}

// ---- 6 -------------------------------------------------------------------

Outcome qubit_superlinearity() {
  std::vector<std::size_t> sizes;
  for (std::size_t n = 5; n <= 40; n += 5) sizes.push_back(n);
  const auto rows = embedding_study(sizes);
  std::vector<double> x, y;
  bool valid = true;
  double nq20 = 0, nq40 = 0;
  for (const auto& r : rows) {
    x.push_back(static_cast<double>(r.size));
    y.push_back(static_cast<double>(r.stats.physical_qubits));
    if (r.size == 20) nq20 = y.back();
    if (r.size == 40) nq40 = y.back();
    const HardwareTopology t = build_chimera(clique_grid_size(r.size));
    Qubo dense(r.size);
    for (double& v : dense.packed_quadratic()) v = 1.0;
    valid &= verify_embedding(embed_clique(r.size, t), dense, t).ok;
  }
  const double lin = polyfit_residual(x, y, 1);
  const double quad = polyfit_residual(x, y, 2);
  const double ratio = nq40 / nq20;
  return {ratio >= 3.0 && quad < lin && valid,
          "NQ(20)=" + fmt("%.0f", nq20) + ", NQ(40)=" + fmt("%.0f", nq40) +
              ", ratio " + fmt("%.3f", ratio) + "; SSR linear " +
              fmt("%.2f", lin) + " vs quadratic " + fmt("%.2f", quad) +
              (valid ? "; embeddings verified" : "; INVALID embedding")};
}

// ---- 7 -------------------------------------------------------------------

Outcome mutation_validity() {
  Rng rng(7);
  int invalid = 0, nonlocal = 0, adjusted = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    SignalSpec s = qamut::testing::pedal_spec();
    s.max_rate = rng.uniform(0.05, 2.0);
    Rng gen(derive_seed(7, {static_cast<std::uint64_t>(inst)}));
    TestSuite one = generate_suite(s, 1, 10, gen);
    const TestCase& tc = one.cases.front();
    const std::size_t n = tc.size();
    MetricSeries m{tc.id, random_values(n, rng), std::vector<double>(n, 0.0),
                   std::vector<double>(n, 0.0)};
    std::vector<std::size_t> sel;
    const auto picks = static_cast<std::size_t>(rng.uniform_int(0, 8));
    for (std::size_t k = 0; k < picks; ++k)
      sel.push_back(static_cast<std::size_t>(rng.uniform_int(0, n - 1)));
    const auto radius = static_cast<std::size_t>(rng.uniform_int(5, 150));
    const MutationPlan plan = plan_mutations(tc, sel, m, 50, radius, 2.0);
    const TestCase out = apply_mutations(tc, plan);
    if (!is_valid(out.input)) ++invalid;
    for (std::size_t k = 0; k < n; ++k) {
      bool near = false;
      for (const MutationPoint& p : plan.points)
        near |= (k + radius >= p.index) && (k <= p.index + radius);
      if (!near && out.input[k] != tc.input[k]) {
        ++nonlocal;
        break;
      }
    }
    for (const std::string& note : out.notes)
      adjusted += note.find("not reachable") != std::string::npos;
  }
  const SignalSpec r5{"fuel", 0.0, 5.0, 1.0, 10.0, 0.01};
  bool identities = true;
  for (double v : {0.0, 0.3, 1.7, 2.5, 4.99, 5.0})
    identities &= mutate_point(v, 0.0, r5) == v;
  identities &= mutate_point(2.5, 1.0, r5) == 5.0;
  return {invalid == 0 && nonlocal == 0 && identities,
          std::to_string(invalid) + " invalid and " + std::to_string(nonlocal) +
              " non-local outputs over 1000 cases (" +
              std::to_string(adjusted) + " rate-limited targets); identities " +
              (identities ? "exact" : "BROKEN")};
}

// ---- 8 -------------------------------------------------------------------

Outcome effectiveness_ordering() {
  CampaignConfig cfg;
  cfg.heuristics = {Heuristic::kSimulatedAnnealing, Heuristic::kRandom};
  cfg.repeats = 10;
  cfg.epsilon = 0.1;
  cfg.seed = 8;
  const ExperimentReport rep = run_campaign(cfg);
  std::size_t errors = 0;
  for (const CellResult& c : rep.cells) errors += c.error.has_value();
  const auto sa = rep.pfds(Heuristic::kSimulatedAnnealing);
  const auto rnd = rep.pfds(Heuristic::kRandom);
  if (sa.size() < 3 || rnd.size() < 3)
    return {false, std::to_string(errors) + " failed campaign cells"};
  const double p = rank_sum_test(sa, rnd);
  const double m_sa = median(sa), m_rnd = median(rnd);
  std::vector<double> seed_eff;
  for (const SeedResult& s : rep.seeds)
    seed_eff.push_back(s.median_case_max_effectiveness);
  double sa_eff = 0.0;
  for (const HeuristicSummary& h : rep.summary)
    if (h.heuristic == Heuristic::kSimulatedAnnealing)
      sa_eff = h.effectiveness_median;
  const double seed_med = median(seed_eff);
  return {rep.faults.size() == 50 && m_sa >= m_rnd && sa_eff >= seed_med,
          std::to_string(rep.faults.size()) + " faults; median PFD SA " +
              fmt("%.1f", m_sa) + "% vs random " + fmt("%.1f", m_rnd) +
              "% (rank-sum p=" + fmt("%.4f", p) +
              "); median per-case max effectiveness SA " + fmt("%.4f", sa_eff) +
              " vs seed " + fmt("%.4f", seed_med)};
}

// ---- 9 -------------------------------------------------------------------

Outcome remote_integrity() {
  Rng rng(9);
  MockSamplerServer clean;
  MockSamplerServer::Options o;
  o.corrupt = true;
  MockSamplerServer corrupt(o);
  int matched = 0, caught = 0;
  for (int k = 0; k < 100; ++k) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 12));
    const Qubo q = random_qubo(n, rng);
    const SampleSet local = solve_exact(q);
    const SampleSet remote = submit_remote(q, 10, clean.endpoint(), 10.0);
    bool same = remote.samples.size() == local.samples.size();
    for (std::size_t i = 0; same && i < local.samples.size(); ++i)
      same = remote.samples[i].selection == local.samples[i].selection &&
             std::abs(remote.samples[i].energy - local.samples[i].energy) <=
                 1e-6;
    matched += same;
    try {
      submit_remote(q, 10, corrupt.endpoint(), 10.0);
    } catch (const IntegrityError&) {
      ++caught;
    }
  }
  return {matched == 100 && caught == 100,
          std::to_string(matched) + "/100 round trips match the local oracle; " +
              std::to_string(caught) + "/100 corrupted responses rejected"};
}

// ---- 10 ------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  CampaignConfig cfg;
  cfg.heuristics = {Heuristic::kSimulatedAnnealing, Heuristic::kEvolutionary,
                    Heuristic::kRandom};
  cfg.seed = 10;
  const auto root =
      std::filesystem::temp_directory_path() / "qamut_acceptance_determinism";
  std::filesystem::remove_all(root);
  for (const char* run : {"a", "b"}) write_report(run_campaign(cfg), root / run);
  std::size_t files = 0, differing = 0;
  for (const auto& e :
       std::filesystem::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file() || e.path().filename() == "timings.tsv") continue;
    ++files;
    const auto rel = std::filesystem::relative(e.path(), root / "a");
    if (slurp(e.path()) != slurp(root / "b" / rel)) ++differing;
  }
  std::filesystem::remove_all(root);
  return {files > 0 && differing == 0,
          std::to_string(files) + " report files compared, " +
              std::to_string(differing) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qamut acceptance suite"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-10)")
      ->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "worked-example energies", 1, worked_example},
      {2, "QUBO expansion identity", 30, qubo_algebra},
      {3, "sampler oracle equivalence", 300, sampler_oracle},
      {4, "proximity constraint soundness", 120, constraint_soundness},
      {5, "decomposition consistency", 60, decomposition_consistency},
      {6, "qubit superlinearity", 10, qubit_superlinearity},
      {7, "mutation validity", 60, mutation_validity},
      {8, "effectiveness ordering", 900, effectiveness_ordering},
      {9, "remote protocol integrity", 60, remote_integrity},
      {10, "report determinism", 1200, determinism},
  };

  int failed = 0;
  for (const Criterion& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] criterion %d: %s: %s; %.2f s (budget %.0f s%s)\n",
                pass ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(),
                secs, c.budget_seconds, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
