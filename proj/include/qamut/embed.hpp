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

// Chimera hardware graphs and minor-embedding of dense QUBOs, used to count
// the physical qubits a problem of a given size consumes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qamut/error.hpp"
#include "qamut/qubo.hpp"

namespace qamut {

// Undirected hardware graph. Chimera node ids are
// ((row * m + col) * 2 + shore) * 4 + k; shore 0 qubits couple vertically to
// the same k in the cells above and below, shore 1 qubits horizontally.
class HardwareTopology {
 public:
  HardwareTopology() = default;
  explicit HardwareTopology(std::size_t nodes) : adj_(nodes) {}

  std::size_t nodes() const { return adj_.size(); }
  std::size_t edges() const { return edges_; }
  std::size_t chimera_m() const { return m_; }
  std::span<const std::size_t> neighbors(std::size_t u) const {
    return adj_.at(u);
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u == v) throw ShapeError("self-loop on node " + std::to_string(u));
    if (u >= nodes() || v >= nodes()) throw ShapeError("edge node out of range");
    if (has_edge(u, v)) return;
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
    ++edges_;
  }

  bool has_edge(std::size_t u, std::size_t v) const {
    if (u >= nodes() || v >= nodes()) return false;
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

  void set_chimera_m(std::size_t m) { m_ = m; }

 private:
  static void insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::size_t edges_ = 0;
  std::size_t m_ = 0;
};

inline constexpr std::size_t kChimeraShore = 4;

inline std::size_t chimera_node(std::size_t m, std::size_t row,
                                std::size_t col, std::size_t shore,
                                std::size_t k) {
  return ((row * m + col) * 2 + shore) * kChimeraShore + k;
}

inline HardwareTopology build_chimera(std::size_t m) {
  if (m < 1) throw ConfigurationError("chimera grid size must be >= 1");
  HardwareTopology t(8 * m * m);
  t.set_chimera_m(m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t k = 0; k < kChimeraShore; ++k) {
        for (std::size_t j = 0; j < kChimeraShore; ++j)
          t.add_edge(chimera_node(m, r, c, 0, k), chimera_node(m, r, c, 1, j));
        if (r + 1 < m)
          t.add_edge(chimera_node(m, r, c, 0, k),
                     chimera_node(m, r + 1, c, 0, k));
        if (c + 1 < m)
          t.add_edge(chimera_node(m, r, c, 1, k),
                     chimera_node(m, r, c + 1, 1, k));
      }
  return t;
}

struct Embedding {
  std::vector<std::vector<std::size_t>> chains;  // indexed by variable
};

// Grid size the clique scheme needs for n_vars variables.
inline std::size_t clique_grid_size(std::size_t n_vars) {
  return (n_vars + kChimeraShore - 1) / kChimeraShore;
}

// Deterministic complete-graph embedding. Variable v = 4b + s owns the
// vertical qubits s of cells (0..b, b) and the horizontal qubits s of cells
// (b, b..M-1), M = ceil(n/4), so every chain has M + 1 qubits and any two
// chains meet inside cell (min block, max block).
inline Embedding embed_clique(std::size_t n_vars,
                              const HardwareTopology& topo) {
  const std::size_t need = clique_grid_size(n_vars);
  const std::size_t m = topo.chimera_m();
  if (m == 0) throw ConfigurationError("clique scheme needs a chimera graph");
  if (need > m)
    throw CapacityError("clique of " + std::to_string(n_vars) +
                        " variables needs a chimera grid of m=" +
                        std::to_string(need) + ", topology has m=" +
                        std::to_string(m));
  Embedding e;
  e.chains.resize(n_vars);
  for (std::size_t v = 0; v < n_vars; ++v) {
    const std::size_t b = v / kChimeraShore, s = v % kChimeraShore;
    auto& chain = e.chains[v];
    for (std::size_t r = 0; r <= b; ++r)
      chain.push_back(chimera_node(m, r, b, 0, s));
    for (std::size_t c = b; c < need; ++c)
      chain.push_back(chimera_node(m, b, c, 1, s));
    std::sort(chain.begin(), chain.end());
  }
  return e;
}

struct EmbeddingStats {
  std::size_t physical_qubits = 0;
  std::size_t max_chain = 0;
  double mean_chain = 0.0;
};

inline EmbeddingStats embedding_stats(const Embedding& e) {
  EmbeddingStats s;
  for (const auto& c : e.chains) {
    s.physical_qubits += c.size();
    s.max_chain = std::max(s.max_chain, c.size());
  }
  if (!e.chains.empty())
    s.mean_chain = static_cast<double>(s.physical_qubits) /
                   static_cast<double>(e.chains.size());
  return s;
}

struct EmbeddingVerdict {
  bool ok = true;
  std::string violation;
};

// Checks chain non-emptiness, disjointness, connectivity and edge coverage
// for every nonzero coupling of `logical`. Reports the first failure.
inline EmbeddingVerdict verify_embedding(const Embedding& e,
                                         const Qubo& logical,
                                         const HardwareTopology& topo) {
  auto fail = [](std::string why) { return EmbeddingVerdict{false, why}; };
  if (e.chains.size() != logical.size())
    return fail("embedding has " + std::to_string(e.chains.size()) +
                " chains for " + std::to_string(logical.size()) +
                " variables");
  std::vector<long> owner(topo.nodes(), -1);
  for (std::size_t v = 0; v < e.chains.size(); ++v) {
    const auto& chain = e.chains[v];
    if (chain.empty()) return fail("chain " + std::to_string(v) + " is empty");
    for (std::size_t q : chain) {
      if (q >= topo.nodes())
        return fail("chain " + std::to_string(v) + " uses missing qubit " +
                    std::to_string(q));
      if (owner[q] != -1)
        return fail("qubit " + std::to_string(q) + " shared by chains " +
                    std::to_string(owner[q]) + " and " + std::to_string(v));
      owner[q] = static_cast<long>(v);
    }
  }
  for (std::size_t v = 0; v < e.chains.size(); ++v) {
    const auto& chain = e.chains[v];
    std::vector<std::size_t> stack{chain.front()};
    std::vector<std::size_t> seen{chain.front()};
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t w : topo.neighbors(u))
        if (owner[w] == static_cast<long>(v) &&
            std::find(seen.begin(), seen.end(), w) == seen.end()) {
          seen.push_back(w);
          stack.push_back(w);
        }
    }
    if (seen.size() != chain.size())
      return fail("chain " + std::to_string(v) + " is disconnected");
  }
  std::optional<std::string> missing;
  logical.for_each_quadratic([&](std::size_t i, std::size_t j, double) {
    if (missing) return;
    for (std::size_t a : e.chains[i])
      for (std::size_t w : topo.neighbors(a))
        if (owner[w] == static_cast<long>(j)) return;
    missing = "no coupler between chains " + std::to_string(i) + " and " +
              std::to_string(j);
  });
  if (missing) return fail(*missing);
  return {};
}

struct EmbeddingStudyRow {
  std::size_t size;
  EmbeddingStats stats;
};

// Clique embeddings on the smallest sufficient chimera grid per size.
inline std::vector<EmbeddingStudyRow> embedding_study(
    std::span<const std::size_t> sizes) {
  std::vector<EmbeddingStudyRow> rows;
  for (std::size_t n : sizes) {
    if (n < 1) throw ConfigurationError("problem size must be >= 1");
    HardwareTopology t = build_chimera(clique_grid_size(n));
    rows.push_back({n, embedding_stats(embed_clique(n, t))});
  }
  return rows;
}

inline void write_embedding_study(std::ostream& os,
                                  std::span<const EmbeddingStudyRow> rows) {
  os << "size\tphysical_qubits\tmax_chain\tmean_chain\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu\t%zu\t%zu\t%.3f\n", r.size,
                  r.stats.physical_qubits, r.stats.max_chain,
                  r.stats.mean_chain);
    os << buf;
  }
}

// Sum of squared residuals of the least-squares polynomial fit of the given
// degree (normal equations, partial pivoting).
inline double polyfit_residual(std::span<const double> x,
                               std::span<const double> y, std::size_t degree) {
  const std::size_t k = degree + 1;
  if (x.size() != y.size() || x.size() < k)
    throw InsufficientDataError("not enough points for the fit");
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t p = 0; p < x.size(); ++p) {
    std::vector<double> pw(2 * k - 1, 1.0);
    for (std::size_t d = 1; d < pw.size(); ++d) pw[d] = pw[d - 1] * x[p];
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) a[r][c] += pw[r + c];
      a[r][k] += pw[r] * y[p];
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    if (a[c][c] == 0.0) throw InsufficientDataError("singular fit");
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  double ss = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    double fit = 0.0, xp = 1.0;
    for (std::size_t d = 0; d < k; ++d, xp *= x[p]) fit += a[d][k] / a[d][d] * xp;
    ss += (y[p] - fit) * (y[p] - fit);
  }
  return ss;
}

}  // namespace qamut
