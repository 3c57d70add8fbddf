#include <doctest.h>

#include <random>

#include "polygrid/graph.hpp"
#include "support/rank_oracle.hpp"

using namespace polygrid;

TEST_CASE("incidence matrix definition") {
  const BranchGraph single(2, {{0, 1}});
  ComplexMatrix expected(1, 2);
  expected << 1.0, -1.0;
  CHECK((single.incidence_matrix() - expected).cwiseAbs().maxCoeff() == 0.0);

  const BranchGraph chain(3, {{0, 1}, {1, 2}});
  ComplexMatrix chain_expected(2, 3);
  chain_expected << 1.0, -1.0, 0.0, 0.0, 1.0, -1.0;
  CHECK((chain.incidence_matrix() - chain_expected).cwiseAbs().maxCoeff() == 0.0);

  const BranchGraph lonely(3, {});
  CHECK(lonely.incidence_matrix().rows() == 0);
  CHECK(lonely.incidence_matrix().cols() == 3);
}

TEST_CASE("graph construction validation") {
  CHECK_THROWS_AS(BranchGraph(0, {}), Error);
  CHECK_THROWS_AS(BranchGraph(2, {{0, 2}}), Error);
  CHECK_THROWS_AS(BranchGraph(2, {{1, 1}}), Error);
}

TEST_CASE("weak connectivity") {
  CHECK(BranchGraph(1, {}).is_weakly_connected());
  CHECK_FALSE(BranchGraph(2, {}).is_weakly_connected());
  // Cycle with arbitrary directions.
  CHECK(BranchGraph(4, {{0, 1}, {2, 1}, {2, 3}, {0, 3}}).is_weakly_connected());
  CHECK(BranchGraph(5, {{0, 1}, {3, 4}}).weak_component_count() == 3);
}

TEST_CASE("internal edges and cut sets") {
  const BranchGraph chain(3, {{0, 1}, {1, 2}});
  CHECK(chain.internal_edges({0, 1}) == EdgeIndexSet{0});
  CHECK(chain.internal_edges({0, 1, 2}) == EdgeIndexSet{0, 1});
  CHECK(chain.internal_edges({}) == EdgeIndexSet{});

  CHECK(chain.cut_set({0}) == EdgeIndexSet{0});
  CHECK(chain.cut_set({1}) == EdgeIndexSet{1});
  CHECK(chain.cut_set({0, 2}) == EdgeIndexSet{0});

  CHECK_THROWS_AS(chain.cut_set({0, 1, 2}), Error);
  CHECK_THROWS_AS(chain.cut_set({}), Error);
  CHECK_THROWS_AS(chain.internal_edges({7}), Error);

  const BranchGraph split(4, {{0, 1}, {2, 3}});
  CHECK(split.cut_set({0, 1}).empty());
}

TEST_CASE("induced components") {
  const BranchGraph chain(3, {{0, 1}, {1, 2}});
  CHECK(chain.induced_components({0, 2}) == std::vector<NodeSet>{{0}, {2}});
  CHECK(chain.induced_components({0, 1}) == std::vector<NodeSet>{{0, 1}});
  CHECK_THROWS_AS(chain.induced_components({0, 9}), Error);
}

namespace {

BranchGraph random_graph(std::mt19937_64& rng, Index nodes, Index edges) {
  std::uniform_int_distribution<Index> pick(0, nodes - 1);
  std::vector<DirectedEdge> list;
  for (Index e = 0; e < edges; ++e) {
    NodeId a = pick(rng), b = pick(rng);
    if (a == b) b = (b + 1) % nodes;
    list.push_back({a, b});
  }
  return BranchGraph(nodes, std::move(list));
}

}  // namespace

TEST_CASE("every incidence row sums to zero and rank counts components") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const Index nodes = 2 + static_cast<Index>(trial % 9);
    const Index edges = static_cast<Index>(trial % 12);
    const BranchGraph g = random_graph(rng, nodes, edges);
    const ComplexMatrix a = g.incidence_matrix();

    if (a.rows() > 0) {
      // One +1 and one -1 per edge row.
      CHECK(a.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
    }
    const Index expected_rank = nodes - g.weak_component_count();
    if (a.rows() == 0) {
      CHECK(expected_rank == 0);
    } else {
      CHECK(numerical_rank(a).numerical_rank == expected_rank);
      CHECK(testing::elimination_rank(a) == expected_rank);
    }
  }
}

TEST_CASE("random spanning trees have incidence rank n-1") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const Index nodes = 5;
    std::vector<DirectedEdge> edges;
    for (Index n = 1; n < nodes; ++n) {
      std::uniform_int_distribution<Index> pick(0, n - 1);
      edges.push_back({static_cast<NodeId>(n), pick(rng)});
    }
    const BranchGraph tree(nodes, std::move(edges));
    REQUIRE(tree.is_weakly_connected());
    CHECK(numerical_rank(tree.incidence_matrix()).numerical_rank == 4);
  }
}

TEST_CASE("cut and internal sets partition the edge set") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 25; ++trial) {
    const Index nodes = 3 + static_cast<Index>(trial % 6);
    const BranchGraph g = random_graph(rng, nodes, nodes + 2);

    NodeSet w;
    std::uniform_int_distribution<Index> size_pick(1, nodes - 1);
    const Index size = size_pick(rng);
    std::vector<NodeId> ids(static_cast<std::size_t>(nodes));
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    w.assign(ids.begin(), ids.begin() + size);
    NodeSet complement(ids.begin() + size, ids.end());

    const EdgeIndexSet cut_w = g.cut_set(w);
    const EdgeIndexSet cut_c = g.cut_set(complement);
    const EdgeIndexSet int_w = g.internal_edges(w);
    const EdgeIndexSet int_c = g.internal_edges(complement);
    std::vector<Index> all;
    for (const EdgeIndexSet* part : {&cut_w, &cut_c, &int_w, &int_c}) {
      all.insert(all.end(), part->begin(), part->end());
    }
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    CHECK(static_cast<Index>(all.size()) == g.edge_count());
  }
}

TEST_CASE("induced components form a partition") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 25; ++trial) {
    const BranchGraph g = random_graph(rng, 6, 7);
    std::vector<NodeId> ids{0, 1, 2, 3, 4, 5};
    std::shuffle(ids.begin(), ids.end(), rng);
    std::uniform_int_distribution<std::size_t> size_pick(1, 6);
    NodeSet m(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(size_pick(rng)));

    const auto parts = g.induced_components(m);
    NodeSet merged;
    for (const NodeSet& part : parts) {
      CHECK_FALSE(part.empty());
      merged.insert(merged.end(), part.begin(), part.end());
    }
    std::sort(merged.begin(), merged.end());
    NodeSet sorted_m = m;
    std::sort(sorted_m.begin(), sorted_m.end());
    CHECK(merged == sorted_m);

    // No internal edge of m may join two distinct parts.
    for (Index e : g.internal_edges(m)) {
      const DirectedEdge& edge = g.edges()[static_cast<std::size_t>(e)];
      std::size_t part_from = parts.size(), part_to = parts.size();
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (std::binary_search(parts[k].begin(), parts[k].end(), edge.from)) part_from = k;
        if (std::binary_search(parts[k].begin(), parts[k].end(), edge.to)) part_to = k;
      }
      CHECK(part_from == part_to);
    }
  }
}
