#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "lclavg/decomp.hpp"

using namespace lclavg;

namespace {

IdAssignment identity_ids(std::size_t n) {
  IdAssignment ids(n);
  for (std::size_t v = 0; v < n; ++v) ids[v] = v + 1;
  return ids;
}

Tree star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Tree::from_edges(leaves + 1, e);
}

// Every assigned node within distance b of a free root, reached through assigned nodes, descends from it.
bool close_nodes_descend(const DecompositionState& st, NodeId r, std::size_t b) {
  std::vector<std::pair<NodeId, std::size_t>> q{{r, 0}};
  std::vector<NodeId> seen{r};
  for (std::size_t h = 0; h < q.size(); ++h) {
    const auto [x, d] = q[h];
    if (x != r) {
      NodeId a = x;
      while (a != r) {
        const auto p = st.parent(a);
        if (!p) return false;
        a = *p;
      }
    }
    if (d == b) continue;
    for (NodeId y : st.tree().neighbors(x))
      if (!st.is_free(y) && std::find(seen.begin(), seen.end(), y) == seen.end()) {
        seen.push_back(y);
        q.emplace_back(y, d + 1);
      }
  }
  return true;
}

struct SweepResult {
  Decomposition d;
  std::size_t violations = 0;
  std::string first;
};

SweepResult sweep(const Tree& t, std::uint64_t seed, std::size_t ell = 2, bool check_quality = false) {
  const IdAssignment ids = assign_ids(t.node_count(), seed);
  DecompositionParams p;
  p.ell = ell;
  p.check_quality = check_quality;
  SweepResult res;
  const std::size_t gamma = ell + 3;
  res.d = compute_decomposition(t, ids, p, [&](const DecompositionState& st, DecompositionStep step, std::uint32_t) {
    const Verdict v = validate_partial_decomposition(st, gamma, ell);
    if (!v.ok && res.violations++ == 0) res.first = v.message;
    (void)step;
  });
  return res;
}

}  // namespace

TEST_CASE("layer order") {
  CHECK(layer_less_than(LayerLabel::rake(1, 2), LayerLabel::rake(1, 3)));
  CHECK(layer_less_than(LayerLabel::promoted(2), LayerLabel::compress(2)));
  CHECK(layer_less_than(LayerLabel::compress(1), LayerLabel::rake(2, 1)));
  CHECK(layer_less_than(LayerLabel::rake(2, 5), LayerLabel::promoted(2)));
  CHECK_FALSE(layer_less_than(LayerLabel::rake(2, 1), LayerLabel::compress(1)));
  CHECK_FALSE(layer_less_than(LayerLabel::compress(3), LayerLabel::compress(3)));
  CHECK_THROWS_AS(layer_less_than(LayerLabel::free(), LayerLabel::rake(1, 1)), std::logic_error);
  CHECK(higher_or_free(LayerLabel::free(), LayerLabel::compress(9)));
  CHECK_FALSE(higher_or_free(LayerLabel::rake(1, 1), LayerLabel::free()));
}

TEST_CASE("orienting rake") {
  SUBCASE("star leaves") {
    const Tree t = star(3);
    DecompositionState st(t);
    orienting_rake(st, identity_ids(4), 1, 1);
    CHECK(st.is_free(0));
    for (NodeId v = 1; v <= 3; ++v) {
      CHECK(st.layer(v) == LayerLabel::rake(1, 1));
      CHECK(st.parent(v) == std::optional<NodeId>(0));
    }
    CHECK(st.children(0).size() == 3);
  }
  SUBCASE("adjacent degree one pair removes the smaller id") {
    const Tree t = generate_path(2);
    DecompositionState st(t);
    const IdAssignment ids{7, 3};
    orienting_rake(st, ids, 1, 1);
    CHECK(st.is_free(0));
    CHECK(st.layer(1) == LayerLabel::rake(1, 1));
    CHECK(st.parent(1) == std::optional<NodeId>(0));
    orienting_rake(st, ids, 2, 1);
    CHECK(st.layer(0) == LayerLabel::rake(2, 1));
    CHECK(st.is_local_max(0));
  }
  SUBCASE("empty free set") {
    const Tree t = generate_path(3);
    DecompositionState st(t);
    orienting_rake(st, identity_ids(3), 1, 5);
    CHECK(st.free_count() == 0);
    CHECK(orienting_rake(st, identity_ids(3), 2, 5).empty());
  }
  SUBCASE("precondition") {
    const Tree t = generate_path(3);
    DecompositionState st(t);
    st.assign(0, LayerLabel::rake(3, 1));
    CHECK_THROWS_AS(orienting_rake(st, identity_ids(3), 2, 1), DecompositionError);
  }
}

TEST_CASE("orientation is write once with one incoming edge") {
  const Tree t = generate_path(3);
  DecompositionState st(t);
  st.orient(0, 1);
  CHECK_THROWS_AS(st.orient(0, 1), DecompositionError);
  CHECK_THROWS_AS(st.orient(1, 0), DecompositionError);
  CHECK_THROWS_AS(st.orient(2, 1), DecompositionError);
  CHECK(st.orientation(t.edge_between(0, 1)) == Orientation::TowardsB);
}

TEST_CASE("compress with slack") {
  DecompositionParams p;
  p.ell = 2;
  SUBCASE("16 nodes untouched") {
    // A path whose inner 16 nodes have two free neighbors: attach two leaves at each end.
    const std::size_t inner = 16;
    std::vector<Edge> e;
    for (NodeId v = 0; v + 1 < inner; ++v) e.emplace_back(v, v + 1);
    e.emplace_back(0, inner);
    e.emplace_back(0, inner + 1);
    e.emplace_back(inner - 1, inner + 2);
    e.emplace_back(inner - 1, inner + 3);
    const Tree t = Tree::from_edges(inner + 4, e);
    DecompositionState st(t);
    CHECK(compress_with_slack(st, identity_ids(t.node_count()), 1, p, 2).empty());
  }
  SUBCASE("17 nodes") {
    const Tree t = generate_path(19);
    DecompositionState st(t);
    const IdAssignment ids = assign_ids(19, 5);
    std::vector<CompressRecord> recs;
    // Nodes 1..17 have two free neighbors.
    compress_with_slack(st, ids, 1, p, 2, &recs);
    REQUIRE(recs.size() == 1);
    const auto& r = recs[0];
    CHECK(r.nodes.size() == 7);
    CHECK(r.nodes.front() == 6);
    CHECK(r.nodes.back() == 12);
    CHECK(r.slack_first == 5);
    CHECK(r.slack_last == 13);
    REQUIRE(r.z.size() == 1);
    CHECK(r.z[0] == 3);
    CHECK(st.layer(9) == LayerLabel::rake(2, 1));
    for (NodeId v : {6, 7, 8, 10, 11, 12}) CHECK(st.layer(v) == LayerLabel::compress(1));
    CHECK(st.parent(6) == std::optional<NodeId>(5));
    CHECK(st.parent(8) == std::optional<NodeId>(7));
    CHECK(st.parent(12) == std::optional<NodeId>(13));
    CHECK(st.parent(10) == std::optional<NodeId>(11));
    CHECK_FALSE(st.parent(9).has_value());
    CHECK(st.in_n(9));
    CHECK(st.marked(9));
    CHECK(st.is_local_max(9));
    CHECK(validate_partial_decomposition(st, 5, 2).ok);
  }
  SUBCASE("no long degree two path") {
    const Tree t = generate_complete_tree(3, 4);
    DecompositionState st(t);
    CHECK(compress_with_slack(st, identity_ids(t.node_count()), 1, p, 2).empty());
  }
}

TEST_CASE("choose_z gaps") {
  std::mt19937_64 rng(3);
  for (std::size_t ell : {1, 2, 3, 5}) {
    for (std::size_t m = 2 * ell + 3; m < 300; m += 1 + rng() % 7) {
      std::vector<std::uint64_t> ids(m);
      for (auto& x : ids) x = rng();
      const PathColoring col = color_path_power(ids, coloring_distance(ell));
      const ZChoice zc = choose_z(col.color, ids, ell);
      REQUIRE_FALSE(zc.z.empty());
      std::size_t prev = 0;
      bool first = true;
      for (std::size_t z : zc.z) {
        const std::size_t g = first ? z : z - prev - 1;
        CHECK(g >= ell + 1);
        CHECK(g <= 2 * ell + 1);
        prev = z;
        first = false;
      }
      const std::size_t last = m - prev - 1;
      CHECK(last >= ell + 1);
      CHECK(last <= 2 * ell + 1);
      CHECK(zc.steps >= 1);
    }
  }
}

TEST_CASE("quality") {
  SUBCASE("isolated free node") {
    const Tree t = generate_path(1);
    DecompositionState st(t);
    CHECK(st.quality(0) == 0);
    CHECK(st.quality_bfs(0) == 0);
  }
  SUBCASE("free root with raked leaves") {
    const Tree t = star(3);
    DecompositionState st(t);
    orienting_rake(st, identity_ids(4), 1, 1);
    CHECK(st.quality(0) == 3);
    CHECK(st.quality_bfs(0) == 3);
  }
  SUBCASE("local maximum") {
    const Tree t = star(3);
    DecompositionState st(t);
    orienting_rake(st, identity_ids(4), 1, 2);
    CHECK(st.is_local_max(0));
    CHECK(st.quality(0) == 0);
    CHECK(st.quality_bfs(0) == 0);
    CHECK(st.marked_count() == 4);
  }
}

namespace {

// Path 0..5 with 2..5 raked towards the end, 0 and 1 free.
DecompositionState promotion_fixture(const Tree& t) {
  DecompositionState st(t);
  for (NodeId v = 5; v >= 2; --v) {
    st.orient(v - 1, v);
    st.assign(v, LayerLabel::rake(1, 6 - v));
  }
  return st;
}

}  // namespace

TEST_CASE("promote if possible") {
  const Tree t = generate_path(6);
  const IdAssignment ids = identity_ids(6);
  SUBCASE("shallow subtree") {
    const Tree s = star(3);
    DecompositionState st(s);
    orienting_rake(st, identity_ids(4), 1, 1);
    std::vector<PromotionRecord> recs;
    CHECK(promote_if_possible(st, identity_ids(4), 1, 4, &recs).empty());
    CHECK(recs.empty());
  }
  SUBCASE("path of exactly b") {
    DecompositionState st = promotion_fixture(t);
    CHECK(st.quality(1) == 4);
    std::vector<PromotionRecord> recs;
    promote_if_possible(st, ids, 2, 4, &recs);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].root == 1);
    CHECK(recs[0].target == 5);
    CHECK(recs[0].interior == std::vector<NodeId>{2, 3, 4});
    CHECK(recs[0].target_local_max);
    for (NodeId v : {2, 3, 4}) CHECK(st.layer(v) == LayerLabel::promoted(2));
    CHECK(st.layer(5) == LayerLabel::rake(3, 1));
    CHECK(st.promoted(5));
    CHECK(st.marked(5));
    CHECK(validate_partial_decomposition(st, 5, 2).ok);
  }
  SUBCASE("guard") {
    DecompositionState st = promotion_fixture(t);
    st.assign(3, LayerLabel::promoted(1));
    std::vector<PromotionRecord> recs;
    CHECK(promote_if_possible(st, ids, 2, 4, &recs).empty());
    CHECK(st.layer(5) == LayerLabel::rake(1, 1));
  }
}

TEST_CASE("validator") {
  SUBCASE("all free") {
    const Tree t = generate_path(5);
    CHECK(validate_partial_decomposition(DecompositionState(t), 5, 2).ok);
  }
  SUBCASE("adjacent nodes in one sublayer") {
    const Tree t = generate_path(4);
    DecompositionState st(t);
    st.assign(1, LayerLabel::rake(1, 1));
    st.assign(2, LayerLabel::rake(1, 1));
    const Verdict v = validate_partial_decomposition(st, 5, 2);
    CHECK_FALSE(v.ok);
    CHECK(v.message.find("property 3") != std::string::npos);
  }
  SUBCASE("compress path too long") {
    const std::size_t ell = 2;
    const Tree t = generate_path(2 * ell + 4);
    DecompositionState st(t);
    for (NodeId v = 1; v <= 2 * ell + 2; ++v) st.assign(v, LayerLabel::compress(1));
    Verdict v = validate_partial_decomposition(st, ell + 3, ell);
    CHECK_FALSE(v.ok);
    CHECK(v.message.find("property 1") != std::string::npos);
    // One node fewer is accepted.
    const Tree t2 = generate_path(2 * ell + 3);
    DecompositionState st2(t2);
    for (NodeId v = 1; v <= 2 * ell + 1; ++v) st2.assign(v, LayerLabel::compress(1));
    CHECK(validate_partial_decomposition(st2, ell + 3, ell).ok);
  }
  SUBCASE("rake component too wide") {
    const Tree t = generate_path(5);
    DecompositionState st(t);
    for (NodeId v = 0; v < 4; ++v) st.assign(v, LayerLabel::rake(1, v + 1));
    CHECK(validate_partial_decomposition(st, 5, 2).ok);
    const Verdict v = validate_partial_decomposition(st, 1, 2);
    CHECK_FALSE(v.ok);
    CHECK(v.message.find("property 2") != std::string::npos);
  }
}

TEST_CASE("compute_decomposition") {
  SUBCASE("single node") {
    const Tree t = generate_path(1);
    const auto d = compute_decomposition(t, identity_ids(1), {});
    CHECK(d.iterations == 1);
    CHECK(d.state.layer(0) == LayerLabel::rake(1, 1));
    CHECK(d.state.marked(0));
  }
  SUBCASE("path of 10^4") {
    const auto r = sweep(generate_path(10000), 11);
    CHECK(r.violations == 0);
    CHECK(r.d.state.free_count() == 0);
    for (const auto& tr : r.d.trace)
      if (tr.iteration >= 5 && tr.iteration % 5 == 0)
        CHECK(static_cast<double>(tr.free_count) <= 10000.0 / std::pow(2.0, tr.iteration / 5));
    CHECK_FALSE(r.d.compress.empty());
  }
  SUBCASE("balanced binary tree 2^14") {
    const auto r = sweep(generate_complete_tree(2, 13), 3);
    CHECK(r.violations == 0);
    CHECK(r.first == "");
    CHECK(r.d.state.free_count() == 0);
  }
  SUBCASE("every node ends marked") {
    const auto r = sweep(generate_random_tree(3000, 4, 8), 8);
    CHECK(r.violations == 0);
    CHECK(r.d.state.marked_count() == 3000);
  }
}

TEST_CASE("decomposition invariants on random trees") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const std::size_t n = 200 + seed * 150;
    const Tree t = seed % 3 == 0 ? generate_path(n) : generate_random_tree(n, seed % 2 ? 3 : 4, seed);
    const IdAssignment ids = assign_ids(n, seed);
    DecompositionParams p;
    p.ell = 2;
    p.check_quality = true;
    std::size_t bad = 0, shallow = 0, not_desc = 0;
    const auto d = compute_decomposition(t, ids, p, [&](const DecompositionState& st, DecompositionStep step,
                                                        std::uint32_t it) {
      if (!validate_partial_decomposition(st, 5, 2).ok) ++bad;
      if (step == DecompositionStep::Rake && it >= 2) shallow += shallow_compress_nodes(st, it - 1, 5).size();
      if (step == DecompositionStep::Promote)
        for (NodeId v = 0; v < st.node_count(); v += 7)
          if (st.is_free(v) && !close_nodes_descend(st, v, 4)) ++not_desc;
    });
    CHECK(bad == 0);
    CHECK(shallow == 0);
    CHECK(not_desc == 0);
    for (const auto& pr : d.promotions) {
      CHECK(pr.target_local_max);
      CHECK(pr.interior.size() == 3);
    }
    CHECK(d.state.free_count() == 0);
    CHECK(d.state.marked_count() == n);
  }
}

TEST_CASE("randomized split") {
  // Elector that keeps every third position plus the last one.
  DecompositionParams p;
  p.ell = 2;
  p.mode = DecompositionMode::Randomized;
  p.elector = [](std::span<const NodeId> mid, std::uint32_t) {
    std::vector<std::size_t> z;
    for (std::size_t k = 0; k + 3 < mid.size(); k += 3) z.push_back(k);
    if (z.empty() || z.back() != mid.size() - 1) z.push_back(mid.size() - 1);
    return z;
  };
  SUBCASE("short inner path takes the first case") {
    const Tree t = generate_path(19);
    DecompositionState st(t);
    std::vector<CompressRecord> recs;
    compress_with_slack(st, identity_ids(19), 1, p, 2, &recs);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].z == std::vector<std::size_t>{3});
    CHECK(validate_partial_decomposition(st, 5, 2).ok);
  }
  SUBCASE("long path") {
    const Tree t = generate_path(2000);
    const auto d = compute_decomposition(t, assign_ids(2000, 4), p);
    CHECK(d.state.free_count() == 0);
    REQUIRE_FALSE(d.compress.empty());
    for (const auto& r : d.compress) {
      CHECK(r.randomized);
      CHECK(r.n_first == 3);
      CHECK(r.nodes.size() - 1 - r.n_last == 3);
    }
    CHECK(validate_partial_decomposition(d.state, 5, 2).ok);
  }
}

TEST_CASE("trace and dump") {
  const auto r = sweep(generate_path(100), 2);
  const std::string csv = trace_csv(r.d.trace);
  CHECK(csv.rfind("iteration,free_count,marked_count,promoted_count\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.d.trace.size() + 1));
  const std::string dump = state_dump(r.d.state);
  CHECK(std::count(dump.begin(), dump.end(), '\n') == 100);
}
