#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lclavg/tree.hpp"

namespace lclavg {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Small per-node generator; a full mt19937_64 per node is too heavy at 2^18 nodes.
class NodeRng {
 public:
  using result_type = std::uint64_t;
  NodeRng() = default;
  NodeRng(std::uint64_t seed, std::uint64_t id) : state_(splitmix64(seed) ^ splitmix64(id ^ 0xa5a5a5a5ULL)) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64(state_);
  }
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_ = 0;
};

struct NodeContext {
  NodeId node = 0;
  std::uint64_t id = 0;
  std::size_t degree = 0;
  std::size_t n = 0;
  std::span<const NodeId> neighbors;
  std::span<const std::uint64_t> neighbor_ids;
  std::span<const int> inputs;  // per port, empty if the run has no inputs
  NodeRng* rng = nullptr;
};

template <class Output>
class Emitter {
 public:
  explicit Emitter(std::optional<Output>& slot) : slot_(slot) {}
  void operator()(Output o) {
    if (slot_.has_value()) throw SimulationError("algorithm emitted output twice");
    slot_ = std::move(o);
  }
  bool emitted() const { return slot_.has_value(); }

 private:
  std::optional<Output>& slot_;
};

template <class Public>
class NeighborView {
 public:
  NeighborView(const std::vector<Public>& pubs, std::span<const NodeId> nb) : pubs_(pubs), nb_(nb) {}
  std::size_t size() const { return nb_.size(); }
  typename std::vector<Public>::const_reference operator[](std::size_t port) const { return pubs_[nb_[port]]; }

 private:
  const std::vector<Public>& pubs_;
  std::span<const NodeId> nb_;
};

template <class A>
concept NodeAlgorithm = requires(const A& a, const NodeContext& ctx, typename A::State& st,
                                 Emitter<typename A::Output>& emit,
                                 const NeighborView<typename A::Public>& view, std::uint64_t r) {
  { a.init(ctx, st, emit) };
  { a.publish(st) } -> std::convertible_to<typename A::Public>;
  { a.step(r, ctx, st, view, emit) };
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) n = -n, d = -d;
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    return {n / (g ? g : 1), d / (g ? g : 1)};
  }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

template <class Output>
struct RunResult {
  std::vector<std::uint64_t> termination_round;
  std::vector<Output> outputs;
  std::uint64_t rounds_total = 0;
};

inline Rational node_averaged_complexity(std::span<const std::uint64_t> rounds) {
  if (rounds.empty()) throw std::invalid_argument("empty run");
  std::uint64_t sum = 0;
  for (auto r : rounds) sum += r;
  return Rational::make(static_cast<std::int64_t>(sum), static_cast<std::int64_t>(rounds.size()));
}

template <class Output>
Rational node_averaged_complexity(const RunResult<Output>& r) {
  return node_averaged_complexity(std::span<const std::uint64_t>(r.termination_round));
}

// Synchronous LOCAL execution. Round r reads the public states published after round r-1.
// A terminated node keeps its last public state forever.
template <NodeAlgorithm A>
RunResult<typename A::Output> run_simulation(const Tree& tree, const IdAssignment& ids, const A& alg,
                                             std::uint64_t seed, std::uint64_t round_limit = 0,
                                             const std::vector<std::vector<int>>* inputs = nullptr) {
  using State = typename A::State;
  using Public = typename A::Public;
  using Output = typename A::Output;
  const std::size_t n = tree.node_count();
  if (ids.size() != n) throw SimulationError("id assignment size mismatch");
  if (round_limit == 0) round_limit = 4 * static_cast<std::uint64_t>(n);
  if (round_limit < n) throw SimulationError("round limit below node count");

  std::vector<NodeRng> rngs(n);
  std::vector<std::vector<std::uint64_t>> nbr_ids(n);
  std::vector<NodeContext> ctx(n);
  for (NodeId v = 0; v < n; ++v) {
    rngs[v] = NodeRng(seed, ids[v]);
    for (NodeId u : tree.neighbors(v)) nbr_ids[v].push_back(ids[u]);
    ctx[v] = NodeContext{v, ids[v], tree.degree(v), n, tree.neighbors(v), nbr_ids[v], {}, &rngs[v]};
    if (inputs) ctx[v].inputs = (*inputs)[v];
  }

  RunResult<Output> res;
  res.termination_round.assign(n, 0);
  std::vector<std::optional<Output>> out(n);
  std::vector<State> states(n);
  std::vector<Public> pubs;
  pubs.reserve(n);
  std::vector<NodeId> alive;
  for (NodeId v = 0; v < n; ++v) {
    Emitter<Output> emit(out[v]);
    alg.init(ctx[v], states[v], emit);
    pubs.push_back(alg.publish(states[v]));
    if (!out[v]) alive.push_back(v);
  }

  std::vector<Public> next;
  std::uint64_t round = 0;
  while (!alive.empty()) {
    ++round;
    if (round > round_limit)
      throw SimulationError("round limit " + std::to_string(round_limit) + " exceeded");
    next.clear();
    next.reserve(alive.size());
    for (NodeId v : alive) {
      Emitter<Output> emit(out[v]);
      NeighborView<Public> view(pubs, tree.neighbors(v));
      alg.step(round, ctx[v], states[v], view, emit);
      next.push_back(alg.publish(states[v]));
    }
    std::size_t keep = 0;
    for (std::size_t i = 0; i < alive.size(); ++i) {
      const NodeId v = alive[i];
      pubs[v] = std::move(next[i]);
      if (out[v])
        res.termination_round[v] = round;
      else
        alive[keep++] = v;
    }
    alive.resize(keep);
  }
  res.outputs.reserve(n);
  for (auto& o : out) res.outputs.push_back(std::move(*o));
  res.rounds_total = 0;
  for (auto t : res.termination_round) res.rounds_total = std::max(res.rounds_total, t);
  return res;
}

// Linial style color reduction step: colors are polynomials of degree d over F_q.
struct LinialStep {
  std::uint64_t q = 0;
  std::uint32_t d = 0;
  std::uint64_t palette_in = 0;
  std::uint64_t palette_out = 0;  // q*q
};

// Reduction steps from palette m for conflict degree D, until no step shrinks the palette.
std::vector<LinialStep> linial_schedule(std::uint64_t max_degree, unsigned __int128 palette);

// One reduction step applied to every node; neighbors(v) lists v's conflict neighbors.
template <class NeighborFn>
std::vector<std::uint64_t> linial_apply(const LinialStep& st, const std::vector<std::uint64_t>& colors,
                                        NeighborFn&& neighbors);

std::uint64_t linial_eval(const LinialStep& st, std::uint64_t color, std::uint64_t x);

struct DistanceColoring {
  std::vector<std::uint64_t> color;
  std::size_t s = 0;
  std::uint64_t palette_size = 0;
  std::uint64_t conflict_degree = 0;  // bound on the degree of G^s
  std::size_t linial_steps = 0;
  std::size_t greedy_steps = 0;
  std::vector<std::uint64_t> rounds;  // per node
};

// Degree bound of G^s for a tree of maximum degree delta.
std::uint64_t power_graph_degree_bound(std::size_t delta, std::size_t s);

// Linial reduction on G^s followed by greedy one-color-at-a-time reduction to D+1 colors.
// Each power-graph round costs s simulator rounds.
DistanceColoring compute_distance_coloring(const Tree& tree, const IdAssignment& ids, std::size_t s);

// Linial-only coloring of the s-th power of a path given by its ids in order.
struct PathColoring {
  std::vector<std::uint64_t> color;
  std::size_t linial_steps = 0;
  std::uint64_t palette_size = 0;
};
PathColoring color_path_power(std::span<const std::uint64_t> ids, std::size_t s);

// Checks that nodes at distance <= s have distinct colors by BFS from every node.
bool is_distance_coloring(const Tree& tree, std::span<const std::uint64_t> colors, std::size_t s);

// ---- template definitions ----

template <class NeighborFn>
std::vector<std::uint64_t> linial_apply(const LinialStep& st, const std::vector<std::uint64_t>& colors,
                                        NeighborFn&& neighbors) {
  std::vector<std::uint64_t> out(colors.size());
  for (std::size_t v = 0; v < colors.size(); ++v) {
    std::uint64_t chosen = st.q;
    for (std::uint64_t x = 0; x < st.q && chosen == st.q; ++x) {
      const std::uint64_t mine = linial_eval(st, colors[v], x);
      bool clash = false;
      neighbors(v, [&](std::size_t u) {
        if (!clash && linial_eval(st, colors[u], x) == mine) clash = true;
      });
      if (!clash) chosen = x;
    }
    if (chosen == st.q) throw SimulationError("linial step found no free evaluation point");
    out[v] = chosen * st.q + linial_eval(st, colors[v], chosen);
  }
  return out;
}

}  // namespace lclavg
