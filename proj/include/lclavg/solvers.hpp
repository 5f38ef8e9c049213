#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lclavg/decomp.hpp"
#include "lclavg/engine.hpp"
#include "lclavg/lcl.hpp"
#include "lclavg/tree.hpp"

namespace lclavg {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  std::size_t ell = 2;
  std::size_t c_fail = 2;
  double c_phase = 4.0;
  std::uint64_t seed = 1;
};

struct SolveResult {
  // Per tree edge: label at edges()[e].first and at edges()[e].second.
  std::vector<std::array<Label, 2>> labels;
  std::vector<std::uint64_t> termination_round;
  std::uint64_t max_rounds = 0;
  std::uint32_t iterations = 0;
  std::uint64_t coloring_rounds = 0;
  std::vector<std::uint32_t> mark_iteration;  // per node, 0 if never marked
  // Randomized compress bookkeeping.
  std::size_t compress_paths = 0;
  std::size_t failures = 0;  // paths whose elected segments left [ell, 2ell]
  std::size_t executions = 0;
  std::vector<std::size_t> segment_lengths;  // nodes between consecutive maxima
  Verdict checker;
};

Rational node_averaged_complexity(const SolveResult& r);

// Per bipartite edge labels for check_solution.
std::vector<Label> to_bipartite_labels(const Tree& t, const BipartiteTree& bt,
                                       std::span<const std::array<Label, 2>> labels);

// ---- shared labeling core ----

// Label-sets bottom-up along the final layering, labels top-down. assigned[v] is the round at which
// v knows its final layer. Termination: a local maximum stops once all its incoming sets arrived,
// other rake nodes one round after their parent, a compress path node once both endpoint choices
// reached it.
struct LayeredSolution {
  std::vector<std::array<Label, 2>> labels;
  std::vector<std::uint64_t> ready;  // round the node's outgoing label-set is available to its parent
  std::vector<std::uint64_t> decided;
};
LayeredSolution solve_on_layers(const LclSpec& spec, const FeasibleFunction& ff, const DecompositionState& st,
                                std::span<const std::uint64_t> assigned);

// ---- deterministic ----

// Rounds charged to the distance coloring: coloring distance times Linial steps on the path power.
std::uint64_t deterministic_coloring_rounds(std::size_t ell);

SolveResult solve_deterministic_avg(const LclSpec& spec, const FeasibleFunction& ff, const Tree& tree,
                                    const SolverConfig& config);

// ---- randomized ----

// A Compress-Problem middle path with positions 0..L-1; positions -1 and L act as maxima.
struct ElectState {
  std::size_t ell = 2;
  std::vector<std::uint8_t> in_z;
  std::vector<std::uint8_t> done;
  std::vector<std::uint32_t> done_execution;  // 0 while not done
  std::size_t executions = 0;

  std::size_t length() const { return in_z.size(); }
};
ElectState make_elect_state(std::size_t length, std::size_t ell);

struct ElectOutcome {
  bool in_z = false;
  bool done = false;
  bool operator==(const ElectOutcome&) const = default;
};

struct ElectExecution {
  std::size_t active = 0;
  std::size_t candidates = 0;
  std::size_t joined = 0;
  std::size_t newly_done = 0;
};

inline double candidate_probability(std::size_t ell) { return 1.0 / (2.0 * static_cast<double>(ell)); }
inline std::uint64_t execution_rounds(std::size_t ell) { return 6 * ell; }

std::vector<std::uint8_t> draw_coins(std::size_t length, double p, std::mt19937_64& rng);
// One execution with given candidate coins; coins of inactive nodes are ignored.
ElectExecution apply_execution(ElectState& st, std::span<const std::uint8_t> coins);
ElectExecution elect_maximums(ElectState& st, std::mt19937_64& rng);
std::vector<ElectOutcome> elect_outcomes(const ElectState& st, std::span<const std::uint8_t> coins);

// The same execution as a message-passing run on a path: nodes flood candidate coins and stop once
// their outcome is determined. Z membership from earlier executions is known to every node.
struct ElectEngineRun {
  std::vector<ElectOutcome> outcomes;
  std::vector<std::uint64_t> rounds;
  std::uint64_t max_rounds = 0;
};
ElectEngineRun run_elect_execution(const ElectState& st, std::span<const std::uint8_t> coins);

inline std::size_t execution_budget(std::size_t ell, std::size_t c_fail, std::size_t n) {
  const double ln = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  return static_cast<std::size_t>(std::ceil(8.0 * static_cast<double>(ell * c_fail) * ln));
}

struct CompressRun {
  ElectState state;
  std::vector<std::size_t> z;         // final maxima positions
  std::vector<std::size_t> segments;  // node counts between consecutive maxima
  bool ok = true;                     // all segments in [ell, 2ell] and every node done
};
CompressRun randomized_compress(std::size_t length, std::size_t ell, std::size_t c_fail, std::size_t n,
                                std::mt19937_64& rng);

SolveResult solve_randomized_avg(const LclSpec& spec, const FeasibleFunction& ff, const Tree& tree,
                                 const SolverConfig& config);

// ---- worst-case baseline for 3-coloring ----

// Rake and compress with one rake per iteration and no promotion; every node waits for the last one.
Decomposition compute_baseline_decomposition(const Tree& tree, const IdAssignment& ids, std::size_t ell);
SolveResult solve_worst_case_baseline(const LclSpec& spec, const FeasibleFunction& ff, const Tree& tree,
                                      const SolverConfig& config);

// Sequential O(diameter) solver; every node stops at the last round of the top-down pass.
SolveResult solve_diameter_oracle(const LclSpec& spec, const Tree& tree);

// ---- hierarchical 2.5-coloring ----

enum class HierLabel : std::uint8_t { W, B, E, D };
char to_char(HierLabel l);

// Sequential peeling.
std::vector<std::uint32_t> compute_levels_oracle(const Tree& tree, std::size_t k);

// Peeling as a LOCAL algorithm: round r removes the nodes with at most two remaining neighbors.
struct LevelAlgorithm {
  std::size_t k = 1;
  struct State {
    std::uint32_t level = 0;
  };
  using Public = std::uint8_t;  // 1 once leveled
  using Output = std::uint32_t;
  void init(const NodeContext& ctx, State& st, Emitter<Output>& emit) const;
  Public publish(const State& st) const { return st.level != 0; }
  void step(std::uint64_t r, const NodeContext& ctx, State& st, const NeighborView<Public>& view,
            Emitter<Output>& emit) const;
};
RunResult<std::uint32_t> compute_levels(const Tree& tree, std::size_t k);

// gamma_i = n^(2^(i-1) / (2^k - 1)) for i = 1..k.
std::vector<double> phase_gammas(std::size_t n, std::size_t k);

struct HierResult {
  std::vector<HierLabel> labels;
  std::vector<std::uint32_t> levels;
  std::vector<std::uint64_t> termination_round;
  std::uint64_t max_rounds = 0;
  std::vector<std::uint64_t> phase_budget;        // t_i
  std::vector<std::size_t> phase_participants;    // level-i nodes that did not output E at once
  std::optional<std::size_t> level_k_decline;     // path length that forced a level-k node to D
  bool participation_bound_ok = true;
  Verdict checker;
};

HierResult solve_hierarchical_2half(const Tree& tree, std::size_t k, const SolverConfig& config);
// The same phases with t_i = c * n^(1/k) for all i; every node waits for the last phase.
HierResult solve_hierarchical_baseline(const Tree& tree, std::size_t k, const SolverConfig& config);

Verdict check_hierarchical_2half(const Tree& tree, std::size_t k, std::span<const HierLabel> labels);

}  // namespace lclavg
