#include "lclavg/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

namespace lclavg {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

Tree Tree::from_edges(std::size_t n, std::vector<Edge> edges) {
  if (n == 0) throw TreeError(TreeErrorKind::Malformed, "tree must have at least one node");
  if (n > std::numeric_limits<NodeId>::max())
    throw TreeError(TreeErrorKind::Overflow, "node count exceeds id range");
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
    if (v >= n || u == v)
      throw TreeError(TreeErrorKind::Malformed,
                      "bad edge " + std::to_string(u) + " " + std::to_string(v));
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw TreeError(TreeErrorKind::DuplicateEdge, "duplicate edge");
  DisjointSets ds(n);
  for (const auto& [u, v] : edges)
    if (!ds.unite(u, v)) throw TreeError(TreeErrorKind::Cycle, "cycle detected");
  if (edges.size() != n - 1) throw TreeError(TreeErrorKind::Disconnected, "graph is disconnected");

  Tree t;
  t.offsets_.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    ++t.offsets_[u + 1];
    ++t.offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    t.max_degree_ = std::max(t.max_degree_, t.offsets_[i + 1]);
    t.offsets_[i + 1] += t.offsets_[i];
  }
  t.adj_.resize(2 * edges.size());
  t.adj_edge_.resize(2 * edges.size());
  std::vector<std::size_t> fill(t.offsets_.begin(), t.offsets_.end() - 1);
  // Edges are sorted, so filling in order yields ascending ports for the smaller endpoint;
  // a per-node sort fixes the rest.
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    t.adj_[fill[u]] = v;
    t.adj_edge_[fill[u]++] = e;
    t.adj_[fill[v]] = u;
    t.adj_edge_[fill[v]++] = e;
  }
  std::vector<std::pair<NodeId, std::size_t>> tmp;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t b = t.offsets_[v], en = t.offsets_[v + 1];
    if (std::is_sorted(t.adj_.begin() + b, t.adj_.begin() + en)) continue;
    tmp.clear();
    for (std::size_t i = b; i < en; ++i) tmp.emplace_back(t.adj_[i], t.adj_edge_[i]);
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t i = b; i < en; ++i) std::tie(t.adj_[i], t.adj_edge_[i]) = tmp[i - b];
  }
  t.edges_ = std::move(edges);
  return t;
}

std::size_t Tree::port_of(NodeId v, NodeId u) const {
  auto nb = neighbors(v);
  auto it = std::lower_bound(nb.begin(), nb.end(), u);
  if (it == nb.end() || *it != u) throw std::out_of_range("not a neighbor");
  return static_cast<std::size_t>(it - nb.begin());
}

std::string validate_tree(const Tree& t) {
  const std::size_t n = t.node_count();
  if (n == 0) return "empty tree";
  if (t.edge_count() != n - 1) return "edge count is not n-1";
  std::size_t maxd = 0;
  for (NodeId v = 0; v < n; ++v) {
    auto nb = t.neighbors(v);
    maxd = std::max(maxd, nb.size());
    if (!std::is_sorted(nb.begin(), nb.end())) return "ports not ascending at " + std::to_string(v);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const NodeId u = nb[p];
      auto back = t.neighbors(u);
      if (!std::binary_search(back.begin(), back.end(), v)) return "asymmetric adjacency";
      const auto& e = t.edges()[t.edge_id(v, p)];
      if (!((e.first == v && e.second == u) || (e.first == u && e.second == v)))
        return "edge id mismatch";
    }
  }
  if (maxd != t.max_degree()) return "max degree mismatch";
  auto dist = bfs_distances(t, 0);
  for (auto d : dist)
    if (d == std::numeric_limits<std::size_t>::max()) return "disconnected";
  return {};
}

std::vector<std::size_t> bfs_distances(const Tree& t, NodeId src) {
  std::vector<std::size_t> dist(t.node_count(), std::numeric_limits<std::size_t>::max());
  std::vector<NodeId> queue{src};
  dist[src] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const NodeId v = queue[h];
    for (NodeId u : t.neighbors(v))
      if (dist[u] == std::numeric_limits<std::size_t>::max()) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
  }
  return dist;
}

Tree generate_path(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n ? n - 1 : 0);
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(i - 1, i);
  return Tree::from_edges(n, std::move(edges));
}

Tree generate_complete_tree(std::size_t arity, std::size_t depth) {
  if (arity < 2) throw std::invalid_argument("arity must be at least 2");
  std::size_t n = 1, level = 1;
  for (std::size_t d = 0; d < depth; ++d) {
    if (level > std::numeric_limits<NodeId>::max() / arity)
      throw TreeError(TreeErrorKind::Overflow, "complete tree too large");
    level *= arity;
    n += level;
    if (n > std::numeric_limits<NodeId>::max())
      throw TreeError(TreeErrorKind::Overflow, "complete tree too large");
  }
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t v = 1; v < n; ++v) edges.emplace_back((v - 1) / arity, v);
  return Tree::from_edges(n, std::move(edges));
}

Tree generate_random_tree(std::size_t n, std::size_t max_degree, std::uint64_t seed) {
  if (max_degree < 2) throw std::invalid_argument("max_degree must be at least 2");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> deg(n, 0);
  std::vector<Edge> edges;
  edges.reserve(n ? n - 1 : 0);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    std::size_t u = pick(rng);
    // A leaf always exists among earlier nodes, so rejection terminates.
    while (deg[u] >= max_degree) u = pick(rng);
    ++deg[u];
    ++deg[v];
    edges.emplace_back(u, v);
  }
  return Tree::from_edges(n, std::move(edges));
}

std::size_t hierarchical_node_count(std::size_t k, std::size_t s) {
  if (k <= 1) return s;
  return s + s * hierarchical_node_count(k - 1, s);
}

namespace {

// Returns the node on the top path that the parent attaches to.
NodeId build_hier(std::size_t k, std::size_t s, std::vector<Edge>& edges, NodeId& next) {
  const NodeId first = next;
  for (std::size_t i = 0; i < s; ++i) {
    const NodeId v = next++;
    if (i > 0) edges.emplace_back(v - 1, v);
  }
  if (k >= 2)
    for (std::size_t i = 0; i < s; ++i) {
      const NodeId root = build_hier(k - 1, s, edges, next);
      edges.emplace_back(first + static_cast<NodeId>(i), root);
    }
  return first;
}

}  // namespace

Tree generate_hierarchical_worst_case(std::size_t k, std::size_t s) {
  if (k < 1 || s < 1) throw std::invalid_argument("k and s must be positive");
  const std::size_t n = hierarchical_node_count(k, s);
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  NodeId next = 0;
  build_hier(k, s, edges, next);
  return Tree::from_edges(n, std::move(edges));
}

BipartiteTree subdivide_edges(const Tree& t) {
  const std::size_t n = t.node_count(), m = t.edge_count();
  std::vector<Edge> edges;
  edges.reserve(2 * m);
  for (std::size_t e = 0; e < m; ++e) {
    const NodeId b = static_cast<NodeId>(n + e);
    edges.emplace_back(t.edges()[e].first, b);
    edges.emplace_back(t.edges()[e].second, b);
  }
  BipartiteTree bt;
  bt.tree = Tree::from_edges(n + m, std::move(edges));
  bt.white_count = n;
  bt.black.assign(n + m, 0);
  bt.half_edges.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    const NodeId b = static_cast<NodeId>(n + e);
    bt.black[b] = 1;
    bt.half_edges[e] = {bt.tree.edge_between(b, t.edges()[e].first),
                        bt.tree.edge_between(b, t.edges()[e].second)};
  }
  return bt;
}

IdAssignment assign_ids(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(n * 2);
  IdAssignment ids;
  ids.reserve(n);
  while (ids.size() < n) {
    const std::uint64_t x = rng();
    if (seen.insert(x).second) ids.push_back(x);
  }
  return ids;
}

Tree read_tree(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (out.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line(line)) throw TreeError(TreeErrorKind::Malformed, "missing node count");
  std::size_t n = 0;
  {
    std::istringstream ls(line);
    long long x = -1;
    std::string rest;
    if (!(ls >> x) || (ls >> rest) || x < 1)
      throw TreeError(TreeErrorKind::Malformed, "bad node count line: " + line);
    n = static_cast<std::size_t>(x);
  }
  std::vector<Edge> edges;
  while (next_line(line)) {
    std::istringstream ls(line);
    long long u = -1, v = -1;
    std::string rest;
    if (!(ls >> u >> v) || (ls >> rest) || u < 0 || v < 0 || u >= v ||
        static_cast<std::size_t>(v) >= n)
      throw TreeError(TreeErrorKind::Malformed, "bad edge line: " + line);
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return Tree::from_edges(n, std::move(edges));
}

std::string write_tree(const Tree& t) {
  std::string out = std::to_string(t.node_count()) + "\n";
  for (const auto& [u, v] : t.edges()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

}  // namespace lclavg
