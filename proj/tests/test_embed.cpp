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

#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "qamut/embed.hpp"

namespace qamut {
namespace {

Qubo complete(std::size_t n) {
  Qubo q(n);
  for (double& v : q.packed_quadratic()) v = 1.0;
  return q;
}

TEST(Chimera, HasTheExpectedNodeAndEdgeCounts) {
  for (std::size_t m = 1; m <= 6; ++m) {
    const HardwareTopology t = build_chimera(m);
    EXPECT_EQ(t.nodes(), 8 * m * m);
    EXPECT_EQ(t.edges(), 16 * m * m + 8 * m * (m - 1));
    EXPECT_EQ(t.chimera_m(), m);
  }
  EXPECT_THROW(build_chimera(0), ConfigurationError);
}

TEST(Chimera, CouplesShoresWithinACellAndAcrossNeighbors) {
  const HardwareTopology t = build_chimera(2);
  const auto n = [](std::size_t r, std::size_t c, std::size_t s, std::size_t k) {
    return chimera_node(2, r, c, s, k);
  };
  EXPECT_TRUE(t.has_edge(n(0, 0, 0, 1), n(0, 0, 1, 3)));
  EXPECT_FALSE(t.has_edge(n(0, 0, 0, 1), n(0, 0, 0, 2)));
  EXPECT_TRUE(t.has_edge(n(0, 1, 0, 2), n(1, 1, 0, 2)));
  EXPECT_FALSE(t.has_edge(n(0, 1, 0, 2), n(1, 1, 0, 3)));
  EXPECT_TRUE(t.has_edge(n(1, 0, 1, 0), n(1, 1, 1, 0)));
  EXPECT_FALSE(t.has_edge(n(1, 0, 0, 0), n(1, 1, 0, 0)));
  EXPECT_EQ(t.neighbors(n(0, 0, 0, 0)).size(), 5u);
  EXPECT_EQ(n(1, 1, 1, 3), 31u);
}

TEST(HardwareTopology, RejectsSelfLoopsAndIgnoresRepeats) {
  HardwareTopology t(3);
  t.add_edge(0, 1);
  t.add_edge(1, 0);
  EXPECT_EQ(t.edges(), 1u);
  EXPECT_THROW(t.add_edge(2, 2), ShapeError);
  EXPECT_THROW(t.add_edge(0, 3), ShapeError);
  EXPECT_FALSE(t.has_edge(0, 7));
}

// A four-variable clique inside a single unit cell: two single-qubit chains
// and two chains of one vertical plus one horizontal qubit.
TEST(VerifyEmbedding, AcceptsAHandBuiltUnitCellClique) {
  const HardwareTopology t = build_chimera(1);
  const auto v = [](std::size_t k) { return chimera_node(1, 0, 0, 0, k); };
  const auto h = [](std::size_t k) { return chimera_node(1, 0, 0, 1, k); };
  const Embedding e{{{v(1), h(1)}, {v(0)}, {h(0)}, {v(2), h(2)}}};
  const auto verdict = verify_embedding(e, complete(4), t);
  EXPECT_TRUE(verdict.ok) << verdict.violation;
  const EmbeddingStats s = embedding_stats(e);
  EXPECT_EQ(s.physical_qubits, 6u);
  EXPECT_EQ(s.max_chain, 2u);
  EXPECT_DOUBLE_EQ(s.mean_chain, 1.5);
}

TEST(VerifyEmbedding, ReportsEachKindOfViolation) {
  const HardwareTopology t = build_chimera(1);
  const Qubo k2 = complete(2);
  EXPECT_NE(verify_embedding({{{0}}}, k2, t).violation.find("chains"),
            std::string::npos);
  EXPECT_NE(verify_embedding({{{0}, {}}}, k2, t).violation.find("empty"),
            std::string::npos);
  EXPECT_NE(verify_embedding({{{0}, {99}}}, k2, t).violation.find("missing"),
            std::string::npos);
  EXPECT_NE(verify_embedding({{{0, 4}, {4}}}, k2, t).violation.find("shared"),
            std::string::npos);
  EXPECT_NE(verify_embedding({{{0, 1}, {4}}}, k2, t).violation.find(
                "disconnected"),
            std::string::npos);
  EXPECT_NE(verify_embedding({{{0}, {1}}}, k2, t).violation.find("coupler"),
            std::string::npos);
  Qubo none(2);
  EXPECT_TRUE(verify_embedding({{{0}, {1}}}, none, t).ok);
}

TEST(EmbedClique, TwentyVariablesUseChainsOfSix) {
  const HardwareTopology t = build_chimera(clique_grid_size(20));
  const Embedding e = embed_clique(20, t);
  EXPECT_TRUE(verify_embedding(e, complete(20), t).ok);
  const EmbeddingStats s = embedding_stats(e);
  EXPECT_EQ(s.physical_qubits, 120u);
  EXPECT_EQ(s.max_chain, 6u);
  EXPECT_DOUBLE_EQ(s.mean_chain, 6.0);
}

TEST(EmbedClique, VerifiesForEverySizeUpToForty) {
  for (std::size_t n = 1; n <= 40; ++n) {
    const HardwareTopology t = build_chimera(clique_grid_size(n));
    const Embedding e = embed_clique(n, t);
    const auto verdict = verify_embedding(e, complete(n), t);
    ASSERT_TRUE(verdict.ok) << "n=" << n << ": " << verdict.violation;
    const std::size_t chain = (n + 3) / 4 + 1;
    for (const auto& c : e.chains) EXPECT_EQ(c.size(), chain);
  }
}

TEST(EmbedClique, FitsInsideLargerGrids) {
  const HardwareTopology t = build_chimera(6);
  const Embedding e = embed_clique(10, t);
  EXPECT_TRUE(verify_embedding(e, complete(10), t).ok);
}

TEST(EmbedClique, RefusesTooSmallOrForeignTopologies) {
  EXPECT_THROW(embed_clique(9, build_chimera(2)), CapacityError);
  EXPECT_THROW(embed_clique(2, HardwareTopology(8)), ConfigurationError);
}

TEST(EmbeddingStudy, GrowsQuadraticallyInPhysicalQubits) {
  std::vector<std::size_t> sizes;
  for (std::size_t n = 4; n <= 100; n += 4) sizes.push_back(n);
  const auto rows = embedding_study(sizes);
  ASSERT_EQ(rows.size(), sizes.size());
  std::vector<double> x, y;
  for (const auto& r : rows) {
    EXPECT_EQ(r.stats.physical_qubits, r.size * (r.size / 4 + 1));
    x.push_back(static_cast<double>(r.size));
    y.push_back(static_cast<double>(r.stats.physical_qubits));
  }
  EXPECT_NEAR(polyfit_residual(x, y, 2), 0.0, 1e-6);
  EXPECT_GT(polyfit_residual(x, y, 1), 1000.0);
}

TEST(EmbeddingStudy, WritesATable) {
  const std::vector<std::size_t> sizes{4, 5};
  std::ostringstream os;
  write_embedding_study(os, embedding_study(sizes));
  EXPECT_EQ(os.str(),
            "size\tphysical_qubits\tmax_chain\tmean_chain\n"
            "4\t8\t2\t2.000\n"
            "5\t15\t3\t3.000\n");
}

TEST(PolyfitResidual, NeedsEnoughPoints) {
  const std::vector<double> x{1, 2}, y{1, 2};
  EXPECT_THROW(polyfit_residual(x, y, 2), InsufficientDataError);
  EXPECT_NEAR(polyfit_residual(x, y, 1), 0.0, 1e-12);
}

}  // namespace
}  // namespace qamut
