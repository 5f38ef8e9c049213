#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lclavg/tree.hpp"

namespace lclavg {

using Label = int;
// Subset of output labels; bit l stands for output label l.
using LabelSet = std::uint32_t;

inline LabelSet singleton(Label l) { return LabelSet{1} << l; }
inline bool contains(LabelSet s, Label l) { return (s >> l) & 1U; }
int set_size(LabelSet s);
std::vector<Label> members(LabelSet s);
Label lowest(LabelSet s);

struct IoPair {
  int in = 0;
  Label out = 0;
  auto operator<=>(const IoPair&) const = default;
};
using Multiset = std::vector<IoPair>;

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A set of allowed multisets of (input, output) pairs.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(std::size_t inputs, std::size_t outputs, const std::vector<Multiset>& allowed);

  bool allows(std::span<const IoPair> m) const;
  // True if some allowed multiset of the given size contains m as a sub-multiset.
  bool extendable(std::span<const IoPair> m, std::size_t size) const;
  bool empty() const { return list_.empty(); }
  const std::vector<Multiset>& multisets() const { return list_; }

 private:
  int code(const IoPair& p) const { return p.in * static_cast<int>(outputs_) + p.out; }
  std::uint64_t key(std::span<const IoPair> m) const;

  std::size_t outputs_ = 0;
  std::size_t codes_ = 0;
  std::size_t max_size_ = 0;
  std::vector<Multiset> list_;
  std::unordered_set<std::uint64_t> keys_;
  std::set<std::vector<int>> fallback_;
  bool use_keys_ = true;
};

// LCL in the black-white formalism.
class LclSpec {
 public:
  LclSpec() = default;
  LclSpec(std::vector<std::string> inputs, std::vector<std::string> outputs, std::vector<Multiset> white,
          std::vector<Multiset> black);

  std::size_t input_count() const { return inputs_.size(); }
  std::size_t output_count() const { return outputs_.size(); }
  const std::vector<std::string>& input_names() const { return inputs_; }
  const std::vector<std::string>& output_names() const { return outputs_; }
  LabelSet all_outputs() const { return (LabelSet{1} << outputs_.size()) - 1; }
  const ConstraintSet& white() const { return white_; }
  const ConstraintSet& black() const { return black_; }

 private:
  std::vector<std::string> inputs_, outputs_;
  ConstraintSet white_, black_;
};

LclSpec parse_lcl_spec(const std::string& text);
std::string write_lcl_spec(const LclSpec& spec);

// Proper 3-coloring: white nodes use one color on all incident edges, black nodes need two colors
// that differ. Output label l stands for color l+1.
LclSpec three_coloring_spec(std::size_t max_degree);

struct NodeEdgeSpec {
  std::vector<std::string> inputs, outputs;
  std::vector<Multiset> node_constraints;
  std::vector<Multiset> edge_constraints;
};
NodeEdgeSpec three_coloring_node_edge_spec(std::size_t max_degree);
LclSpec convert_node_edge_to_black_white(const NodeEdgeSpec& spec);

struct Verdict {
  bool ok = true;
  std::optional<NodeId> node;
  std::string message;
};

// labels and inputs are indexed by bipartite edge; empty inputs means input 0 everywhere.
Verdict check_solution(const LclSpec& spec, const BipartiteTree& bt, std::span<const Label> labels,
                       std::span<const int> inputs = {});

// Half-edge labels: labels[e][0] at edges()[e].first, labels[e][1] at edges()[e].second.
Verdict check_node_edge_solution(const NodeEdgeSpec& spec, const Tree& t,
                                 std::span<const std::array<Label, 2>> labels);

// ---- label-set machinery (edges folded: a tree edge {child, parent} carries the child-side set) ----

struct Incoming {
  LabelSet set = 0;  // labels allowed on the child side
  int input_far = 0;
  int input_near = 0;
};

std::vector<Incoming> as_incoming(std::span<const LabelSet> sets);

// Labels allowed on the near side given the far-side set, through the black constraint.
LabelSet near_side_set(const LclSpec& spec, const Incoming& in);

// g(v): labels for the outgoing edge (v side) that admit a completion of all incoming edges.
LabelSet maximal_label_set_single_node(const LclSpec& spec, std::span<const Incoming> incoming,
                                       int out_input = 0);
LabelSet maximal_label_set_single_node(const LclSpec& spec, std::span<const LabelSet> incoming);

// True if a node without an outgoing edge can label its incoming edges.
bool root_completable(const LclSpec& spec, std::span<const Incoming> incoming);

struct ChosenLabels {
  std::vector<Label> far;   // child-side label per incoming edge
  std::vector<Label> near;  // own-side label per incoming edge
};

// Throws std::logic_error if no completion exists.
ChosenLabels choose_labels_single_node(const LclSpec& spec, std::span<const Incoming> incoming,
                                       std::optional<Label> outgoing, int out_input = 0);
ChosenLabels choose_labels_single_node(const LclSpec& spec, std::span<const LabelSet> incoming,
                                       std::optional<Label> outgoing);

// Memoized g(v) for node configurations that repeat across a large tree.
class LabelSetCache {
 public:
  explicit LabelSetCache(const LclSpec& spec) : spec_(spec) {}
  LabelSet g(std::span<const LabelSet> incoming);

 private:
  const LclSpec& spec_;
  std::unordered_map<std::uint64_t, LabelSet> memo_;
};

// ---- path classes ----

// A path v_1..v_k with an outgoing edge at each end and incoming edges hanging off each node.
// Internal and outgoing edges carry edge_input on all halves.
struct PathInstance {
  std::vector<std::vector<Incoming>> incoming;
  int edge_input = 0;

  std::size_t length() const { return incoming.size(); }
  std::size_t incoming_count() const;
};

// One feasible labeling. hidden holds the near-side labels of incoming edges (node order), then
// for every internal edge its left and right halves.
struct PathLabeling {
  Label out_first = 0;
  Label out_last = 0;
  std::vector<Label> incoming;
  std::vector<Label> hidden;
  auto operator<=>(const PathLabeling&) const = default;
};
using PathClass = std::vector<PathLabeling>;

bool is_feasible_labeling(const LclSpec& spec, const PathInstance& path, const PathLabeling& lab);

// All feasible labelings, sorted. Throws SpecError if there are more than limit of them.
PathClass path_maximal_class(const LclSpec& spec, const PathInstance& path, std::size_t limit = 2000000);

// Throws std::invalid_argument if a member is not feasible.
bool verify_independent_class(const LclSpec& spec, const PathInstance& path, const PathClass& candidate);

struct EndpointSets {
  LabelSet first = 0;
  LabelSet last = 0;
};

class FeasibleFunction {
 public:
  virtual ~FeasibleFunction() = default;
  // Label-sets of the two outgoing edges, i.e. the outgoing labels of the independent class.
  virtual EndpointSets endpoint_sets(const PathInstance& path) const = 0;
  // The independent class as explicit labelings; only for short paths with few incoming edges.
  virtual PathClass independent_class(const PathInstance& path) const = 0;
  // A member of the independent class with the given outgoing labels.
  virtual PathLabeling complete(const PathInstance& path, Label out_first, Label out_last) const = 0;
};

// Hand-written feasible function for three_coloring_spec.
class ThreeColoringFeasible : public FeasibleFunction {
 public:
  explicit ThreeColoringFeasible(LclSpec spec) : spec_(std::move(spec)) {}
  EndpointSets endpoint_sets(const PathInstance& path) const override;
  PathClass independent_class(const PathInstance& path) const override;
  PathLabeling complete(const PathInstance& path, Label out_first, Label out_last) const override;

  // Colors c such that every incoming set keeps a color other than c.
  static LabelSet available_colors(std::span<const Incoming> incoming);

 private:
  LclSpec spec_;
};

// The independent class chosen by ThreeColoringFeasible for the built-in 3-coloring spec.
PathClass feasible_function_3coloring(const PathInstance& path, std::size_t max_degree = 4);

// ---- sequential oracles ----

struct DiameterResult {
  bool solvable = false;
  std::vector<Label> labels;  // per bipartite edge
  std::size_t peel_rounds = 0;
  std::optional<NodeId> empty_at;  // node whose label-set became empty
};

// Leaf peeling with label-sets bottom-up, then a top-down choice.
DiameterResult solve_diameter(const LclSpec& spec, const BipartiteTree& bt, std::span<const int> inputs = {});

// Backtracking over all labelings; returns a valid labeling or nothing.
std::optional<std::vector<Label>> exhaustive_search(const LclSpec& spec, const BipartiteTree& bt,
                                                    std::span<const int> inputs = {});

}  // namespace lclavg
