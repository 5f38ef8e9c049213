#include <algorithm>
#include <random>

#include "doctest.h"
#include "lclavg/tree.hpp"

using namespace lclavg;

namespace {

std::vector<std::size_t> degrees(const Tree& t) {
  std::vector<std::size_t> d;
  for (NodeId v = 0; v < t.node_count(); ++v) d.push_back(t.degree(v));
  return d;
}

// Sequential peeling used as an oracle for hierarchical levels.
std::vector<int> peel_levels(const Tree& t, int k) {
  const std::size_t n = t.node_count();
  std::vector<int> level(n, 0);
  std::vector<std::size_t> deg = degrees(t);
  for (int i = 1; i <= k; ++i) {
    std::vector<NodeId> layer;
    for (NodeId v = 0; v < n; ++v)
      if (level[v] == 0 && deg[v] <= 2) layer.push_back(v);
    for (NodeId v : layer) level[v] = i;
    for (NodeId v : layer)
      for (NodeId u : t.neighbors(v))
        if (level[u] == 0) --deg[u];
  }
  for (auto& l : level)
    if (l == 0) l = k + 1;
  return level;
}

}  // namespace

TEST_CASE("path generator") {
  CHECK(generate_path(1).node_count() == 1);
  CHECK(generate_path(1).edge_count() == 0);
  CHECK(generate_path(2).edge_count() == 1);
  CHECK(degrees(generate_path(5)) == std::vector<std::size_t>{1, 2, 2, 2, 1});
}

TEST_CASE("complete tree generator") {
  CHECK(generate_complete_tree(2, 0).node_count() == 1);
  CHECK(generate_complete_tree(2, 3).node_count() == 15);
  CHECK(generate_complete_tree(3, 2).node_count() == 13);
  CHECK(generate_complete_tree(3, 2).max_degree() == 4);
  CHECK_THROWS_AS(generate_complete_tree(2, 40), TreeError);
}

TEST_CASE("random tree generator") {
  CHECK(generate_random_tree(1, 4, 1).node_count() == 1);
  const Tree t = generate_random_tree(1000, 4, 7);
  CHECK(t.edge_count() == 999);
  CHECK(t.max_degree() <= 4);
  CHECK(validate_tree(t).empty());
  CHECK(generate_random_tree(1000, 4, 7) == t);
  CHECK_FALSE(generate_random_tree(1000, 4, 8) == t);
}

TEST_CASE("all generators produce valid trees") {
  for (std::size_t n : {1, 2, 3, 10, 100, 1000}) {
    CHECK(validate_tree(generate_path(n)).empty());
    for (std::uint64_t seed = 0; seed < 5; ++seed)
      CHECK(validate_tree(generate_random_tree(n, 3, seed)).empty());
  }
  for (std::size_t d = 0; d < 8; ++d) CHECK(validate_tree(generate_complete_tree(2, d)).empty());
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t s : {1, 2, 5, 10}) CHECK(validate_tree(generate_hierarchical_worst_case(k, s)).empty());
}

TEST_CASE("hierarchical worst case construction") {
  CHECK(generate_hierarchical_worst_case(1, 10) == generate_path(10));
  CHECK(generate_hierarchical_worst_case(2, 100).node_count() == 10100);
  CHECK(hierarchical_node_count(3, 4) == 4 + 4 * 20);
}

TEST_CASE("hierarchical levels match the peeling oracle") {
  // k = 2: pendant paths are level 1, interior spine nodes level 2.
  const std::size_t s = 100;
  const Tree t = generate_hierarchical_worst_case(2, s);
  const auto lv = peel_levels(t, 2);
  for (NodeId v = s; v < t.node_count(); ++v) CHECK(lv[v] == 1);
  for (NodeId v = 1; v + 1 < s; ++v) CHECK(lv[v] == 2);
  // Spine ends have degree 2 and peel with the pendant paths.
  CHECK(lv[0] == 1);
  CHECK(lv[s - 1] == 1);
}

TEST_CASE("subdivision") {
  const auto one = subdivide_edges(generate_path(2));
  CHECK(one.tree.node_count() == 3);
  CHECK(one.is_black(2));
  CHECK(one.tree.degree(2) == 2);

  const auto p = subdivide_edges(generate_path(7));
  CHECK(p.tree.node_count() == 13);

  const Tree star = Tree::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  const auto bs = subdivide_edges(star);
  CHECK(bs.tree.node_count() == 7);
  for (NodeId v = 4; v < 7; ++v) {
    CHECK(bs.is_black(v));
    CHECK(bs.tree.degree(v) == 2);
  }
  for (NodeId v = 0; v < 4; ++v) CHECK_FALSE(bs.is_black(v));
}

TEST_CASE("subdivision doubles distances") {
  const Tree t = generate_random_tree(200, 4, 3);
  const auto bt = subdivide_edges(t);
  for (NodeId src : {0u, 17u, 199u}) {
    const auto d1 = bfs_distances(t, src);
    const auto d2 = bfs_distances(bt.tree, src);
    for (NodeId v = 0; v < t.node_count(); ++v) CHECK(d2[v] == 2 * d1[v]);
  }
  // Every bipartite edge joins a white and a black node.
  for (const auto& [u, v] : bt.tree.edges()) CHECK(bt.is_black(u) != bt.is_black(v));
}

TEST_CASE("tree io") {
  const Tree t = read_tree("2\n0 1\n");
  CHECK(t.node_count() == 2);
  CHECK(t.edge_count() == 1);

  auto kind = [](const std::string& text) {
    try {
      read_tree(text);
    } catch (const TreeError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  CHECK(kind("3\n0 1\n0 2\n1 2\n") == static_cast<int>(TreeErrorKind::Cycle));
  CHECK(kind("3\n0 1\n0 1\n") == static_cast<int>(TreeErrorKind::DuplicateEdge));
  CHECK(kind("4\n0 1\n2 3\n") == static_cast<int>(TreeErrorKind::Disconnected));
  CHECK(kind("3\n0 x\n") == static_cast<int>(TreeErrorKind::Malformed));
  CHECK(kind("3\n1 0\n") == static_cast<int>(TreeErrorKind::Malformed));
  CHECK(kind("3\n0 5\n") == static_cast<int>(TreeErrorKind::Malformed));
  CHECK(kind("") == static_cast<int>(TreeErrorKind::Malformed));
}

TEST_CASE("tree io round trip") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Tree t = generate_random_tree(300, 5, seed);
    const std::string text = write_tree(t);
    CHECK(write_tree(read_tree(text)) == text);
    CHECK(read_tree(text) == t);
  }
  // Canonical form sorts edges.
  CHECK(write_tree(read_tree("3\n1 2\n0 1\n")) == "3\n0 1\n1 2\n");
}

TEST_CASE("ids are distinct and deterministic") {
  const auto a = assign_ids(10000, 5);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK(assign_ids(10000, 5) == a);
  CHECK_FALSE(assign_ids(10000, 6) == a);
}
