#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lclavg {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

enum class TreeErrorKind { Malformed, DuplicateEdge, Cycle, Disconnected, Overflow };

class TreeError : public std::runtime_error {
 public:
  TreeError(TreeErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  TreeErrorKind kind() const { return kind_; }

 private:
  TreeErrorKind kind_;
};

// Immutable tree in CSR form. Ports list neighbors in ascending index order.
class Tree {
 public:
  Tree() = default;

  // Throws TreeError if the edges do not form a tree on n nodes.
  static Tree from_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t max_degree() const { return max_degree_; }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  NodeId neighbor(NodeId v, std::size_t port) const { return adj_[offsets_[v] + port]; }
  std::size_t edge_id(NodeId v, std::size_t port) const { return adj_edge_[offsets_[v] + port]; }
  std::span<const std::size_t> incident_edges(NodeId v) const {
    return {adj_edge_.data() + offsets_[v], adj_edge_.data() + offsets_[v + 1]};
  }
  // Port of u in v's adjacency; throws if u is not a neighbor.
  std::size_t port_of(NodeId v, NodeId u) const;
  std::size_t edge_between(NodeId u, NodeId v) const { return edge_id(u, port_of(u, v)); }
  NodeId other_end(std::size_t e, NodeId v) const {
    return edges_[e].first == v ? edges_[e].second : edges_[e].first;
  }

  // Sorted, each edge stored as (u, v) with u < v.
  const std::vector<Edge>& edges() const { return edges_; }

  bool operator==(const Tree& o) const { return offsets_ == o.offsets_ && adj_ == o.adj_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<std::size_t> adj_edge_;
  std::vector<Edge> edges_;
  std::size_t max_degree_ = 0;
};

// Every original edge e = (u, v) becomes a black node n + e adjacent to u and v.
struct BipartiteTree {
  Tree tree;
  std::size_t white_count = 0;
  std::vector<std::uint8_t> black;  // 1 for subdivision nodes
  // half_edges[e][0] is the bipartite edge (u, n+e), half_edges[e][1] is (v, n+e).
  std::vector<std::array<std::size_t, 2>> half_edges;

  bool is_black(NodeId v) const { return black[v] != 0; }
  std::size_t original_edge(NodeId b) const { return b - white_count; }
};

using IdAssignment = std::vector<std::uint64_t>;

// Checks connectivity, acyclicity, symmetry and the degree bound. Returns an empty string if valid.
std::string validate_tree(const Tree& t);

Tree generate_path(std::size_t n);
Tree generate_complete_tree(std::size_t arity, std::size_t depth);
Tree generate_random_tree(std::size_t n, std::size_t max_degree, std::uint64_t seed);
Tree generate_hierarchical_worst_case(std::size_t k, std::size_t s);
std::size_t hierarchical_node_count(std::size_t k, std::size_t s);
BipartiteTree subdivide_edges(const Tree& t);
IdAssignment assign_ids(std::size_t n, std::uint64_t seed);

Tree read_tree(const std::string& text);
std::string write_tree(const Tree& t);

std::vector<std::size_t> bfs_distances(const Tree& t, NodeId src);

}  // namespace lclavg
