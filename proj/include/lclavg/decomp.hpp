#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lclavg/engine.hpp"
#include "lclavg/lcl.hpp"
#include "lclavg/tree.hpp"

namespace lclavg {

enum class LayerKind : std::uint8_t { Free, Rake, PromotedCompress, Compress };

struct LayerLabel {
  LayerKind kind = LayerKind::Free;
  std::uint32_t i = 0;
  std::uint32_t j = 0;

  static LayerLabel free() { return {}; }
  static LayerLabel rake(std::uint32_t i, std::uint32_t j) { return {LayerKind::Rake, i, j}; }
  static LayerLabel compress(std::uint32_t i) { return {LayerKind::Compress, i, 0}; }
  static LayerLabel promoted(std::uint32_t i) { return {LayerKind::PromotedCompress, i, 0}; }

  bool is_free() const { return kind == LayerKind::Free; }
  bool is_rake() const { return kind == LayerKind::Rake; }
  bool is_compress_form() const { return kind == LayerKind::Compress || kind == LayerKind::PromotedCompress; }
  bool operator==(const LayerLabel&) const = default;
};

// Total order on assigned layers; throws std::logic_error if either side is free.
bool layer_less_than(const LayerLabel& a, const LayerLabel& b);
// Free compares above every assigned layer.
bool higher_or_free(const LayerLabel& a, const LayerLabel& than);
std::string to_string(const LayerLabel& l);

// Orientation of edge e relative to tree.edges()[e] = (a, b).
enum class Orientation : std::uint8_t { Unoriented, TowardsA, TowardsB };

class DecompositionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DecompositionState {
 public:
  DecompositionState() = default;
  explicit DecompositionState(const Tree& tree);

  const Tree& tree() const { return *tree_; }
  std::size_t node_count() const { return layer_.size(); }

  const LayerLabel& layer(NodeId v) const { return layer_[v]; }
  bool is_free(NodeId v) const { return layer_[v].is_free(); }
  std::size_t free_count() const { return free_count_; }
  // Number of free neighbors.
  std::size_t free_degree(NodeId v) const { return free_deg_[v]; }
  void assign(NodeId v, LayerLabel l);

  Orientation orientation(std::size_t e) const { return orient_[e]; }
  // Orients {from, to} towards to. Throws on a second orientation or a second incoming edge.
  void orient(NodeId from, NodeId to);
  std::optional<NodeId> parent(NodeId v) const;
  std::vector<NodeId> children(NodeId v) const;

  bool in_n(NodeId v) const { return in_n_[v] != 0; }
  void add_to_n(NodeId v) { in_n_[v] = 1; }
  bool promoted(NodeId v) const { return promoted_[v] != 0; }
  void set_promoted(NodeId v) { promoted_[v] = 1; }
  // Compress nodes of a randomized path between two elected maxima.
  bool relaxed(NodeId v) const { return relaxed_[v] != 0; }
  void set_relaxed(NodeId v) { relaxed_[v] = 1; }

  bool marked(NodeId v) const { return mark_iter_[v] != 0; }
  std::uint32_t mark_iteration(NodeId v) const { return mark_iter_[v]; }
  std::size_t marked_count() const { return marked_count_; }
  // Marks the oriented subtree of v; returns the number of newly marked nodes.
  std::size_t mark_subtree(NodeId v, std::uint32_t iteration);

  // Unmarked nodes in the oriented subtree of v, v included.
  std::size_t unmarked_subtree(NodeId v) const { return unm_[v]; }
  // Incremental quality.
  std::size_t quality(NodeId v) const { return marked(v) ? 0 : unm_[v] - 1; }
  // Quality from a search over the definition.
  std::size_t quality_bfs(NodeId v) const;

  // Assigned, and every neighbor is assigned to a strictly smaller layer.
  bool is_local_max(NodeId v) const;

 private:
  const Tree* tree_ = nullptr;
  std::vector<LayerLabel> layer_;
  std::vector<Orientation> orient_;
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> free_deg_;
  std::vector<std::uint8_t> in_n_, promoted_, relaxed_;
  std::vector<std::uint32_t> mark_iter_;
  std::vector<std::size_t> unm_;
  std::size_t free_count_ = 0;
  std::size_t marked_count_ = 0;
};

enum class DecompositionMode { Deterministic, Randomized };

// Picks the local maxima inside the middle part of a randomized compress path. Gets the middle
// nodes in path order; returns sorted positions that include both ends.
using ZElector = std::function<std::vector<std::size_t>(std::span<const NodeId> middle, std::uint32_t iteration)>;

struct DecompositionParams {
  std::size_t ell = 2;
  DecompositionMode mode = DecompositionMode::Deterministic;
  ZElector elector;  // required in randomized mode
  bool check_quality = false;  // compare incremental and search quality after every step
};

struct CompressRecord {
  std::uint32_t iteration = 0;  // loop iteration of the decomposition
  std::uint32_t layer = 0;      // the compress layer index
  std::vector<NodeId> nodes;    // inner path in order
  NodeId slack_first = 0;       // free neighbors of the two ends
  NodeId slack_last = 0;
  std::vector<std::size_t> z;   // positions in nodes
  std::size_t n_first = 0;      // N range, inclusive
  std::size_t n_last = 0;
  bool randomized = false;
  std::size_t linial_steps = 0;
  std::size_t z_steps = 0;
  std::uint64_t z_cost = 0;     // rounds charged for the Z step
};

struct PromotionRecord {
  std::uint32_t iteration = 0;
  NodeId root = 0;
  NodeId target = 0;
  std::vector<NodeId> interior;  // from the root side to the target side
  bool target_local_max = false;
};

struct IterationTrace {
  std::uint32_t iteration = 0;
  std::size_t free_count = 0;
  std::size_t marked_count = 0;
  std::size_t promoted_count = 0;  // cumulative
  std::size_t compress_paths = 0;
  std::uint64_t z_cost = 0;
};

enum class DecompositionStep { Rake, Compress, Promote };

using DecompositionHook = std::function<void(const DecompositionState&, DecompositionStep, std::uint32_t iteration)>;

struct Decomposition {
  DecompositionState state;
  std::vector<IterationTrace> trace;
  std::vector<CompressRecord> compress;
  std::vector<PromotionRecord> promotions;
  std::size_t ell = 0;
  std::size_t gamma = 0;
  std::size_t b = 0;
  std::uint32_t iterations = 0;
};

// Path-power coloring distance used by the deterministic Z step.
inline std::size_t coloring_distance(std::size_t ell) { return 10 * ell; }

Decomposition compute_decomposition(const Tree& tree, const IdAssignment& ids, const DecompositionParams& params,
                                    const DecompositionHook& hook = {});

// Single steps, exposed for tests. Each returns the nodes it assigned or reassigned.
std::vector<NodeId> orienting_rake(DecompositionState& st, const IdAssignment& ids, std::uint32_t i,
                                   std::size_t gamma);
std::vector<NodeId> compress_with_slack(DecompositionState& st, const IdAssignment& ids, std::uint32_t i,
                                        const DecompositionParams& params, std::uint32_t iteration,
                                        std::vector<CompressRecord>* records = nullptr);
std::vector<NodeId> promote_if_possible(DecompositionState& st, const IdAssignment& ids, std::uint32_t i,
                                        std::size_t b, std::vector<PromotionRecord>* records = nullptr);

// Maximal paths of free nodes with exactly two free neighbors, each in path order.
std::vector<std::vector<NodeId>> free_degree_two_paths(const DecompositionState& st);

// Z positions on an inner path of m nodes, given (color, id) keys; every gap ends in [ell+1, 2ell+1].
struct ZChoice {
  std::vector<std::size_t> z;
  std::size_t passes = 0;
  std::size_t steps = 0;  // longest dependency chain within the decision radius
};
ZChoice choose_z(std::span<const std::uint64_t> colors, std::span<const std::uint64_t> ids, std::size_t ell);

// Checks the three partial-decomposition properties. Compress components hold ell+1..2ell+1 nodes.
Verdict validate_partial_decomposition(const DecompositionState& st, std::size_t gamma, std::size_t ell);

// Nodes of layer Compress(i) closer than gamma to a free node; empty if none.
std::vector<NodeId> shallow_compress_nodes(const DecompositionState& st, std::uint32_t i, std::size_t gamma);

std::string trace_csv(const std::vector<IterationTrace>& trace);
std::string state_dump(const DecompositionState& st);

}  // namespace lclavg
