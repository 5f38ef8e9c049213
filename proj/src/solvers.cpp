#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lclavg/solvers.hpp"

namespace lclavg {

namespace {

constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

std::size_t side_of(const Tree& t, std::size_t e, NodeId v) { return t.edges()[e].first == v ? 0 : 1; }

Verdict check_tree_labels(const LclSpec& spec, const Tree& t, std::span<const std::array<Label, 2>> labels) {
  const BipartiteTree bt = subdivide_edges(t);
  const auto bl = to_bipartite_labels(t, bt, labels);
  return check_solution(spec, bt, bl);
}

}  // namespace

Rational node_averaged_complexity(const SolveResult& r) {
  return node_averaged_complexity(std::span<const std::uint64_t>(r.termination_round));
}

std::vector<Label> to_bipartite_labels(const Tree& t, const BipartiteTree& bt,
                                       std::span<const std::array<Label, 2>> labels) {
  if (labels.size() != t.edge_count()) throw std::invalid_argument("one label pair per edge expected");
  std::vector<Label> out(bt.tree.edge_count());
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    out[bt.half_edges[e][0]] = labels[e][0];
    out[bt.half_edges[e][1]] = labels[e][1];
  }
  return out;
}

// ---- shared labeling core ----

LayeredSolution solve_on_layers(const LclSpec& spec, const FeasibleFunction& ff, const DecompositionState& st,
                                std::span<const std::uint64_t> assigned) {
  const Tree& t = st.tree();
  const std::size_t n = t.node_count();
  if (assigned.size() != n) throw std::invalid_argument("one assignment round per node expected");
  for (NodeId v = 0; v < n; ++v)
    if (st.is_free(v)) throw SolverError("node " + std::to_string(v) + " has no layer");

  struct Unit {
    std::vector<NodeId> nodes;
    NodeId out_first = kNone;
    NodeId out_last = kNone;
    bool path = false;
  };
  auto lower = [&](NodeId a, NodeId b) { return layer_less_than(st.layer(a), st.layer(b)); };
  std::vector<Unit> units;
  constexpr auto kNoUnit = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> unit_of(n, kNoUnit);

  for (NodeId v = 0; v < n; ++v) {
    if (unit_of[v] != kNoUnit) continue;
    const auto uid = static_cast<std::uint32_t>(units.size());
    Unit u;
    if (st.layer(v).is_rake()) {
      u.nodes = {v};
      unit_of[v] = uid;
      for (NodeId y : t.neighbors(v)) {
        if (!lower(v, y)) continue;
        if (u.out_first != kNone) throw SolverError("rake node " + std::to_string(v) + " has two higher neighbors");
        u.out_first = y;
      }
    } else {
      std::vector<NodeId> comp{v};
      unit_of[v] = uid;
      for (std::size_t h = 0; h < comp.size(); ++h)
        for (NodeId y : t.neighbors(comp[h]))
          if (unit_of[y] == kNoUnit && st.layer(y) == st.layer(v)) {
            unit_of[y] = uid;
            comp.push_back(y);
          }
      auto inner_degree = [&](NodeId x) {
        std::size_t d = 0;
        for (NodeId y : t.neighbors(x)) d += unit_of[y] == uid;
        return d;
      };
      NodeId end = kNone;
      for (NodeId x : comp) {
        const std::size_t d = inner_degree(x);
        if (d > 2) throw SolverError("compress component at " + std::to_string(x) + " is not a path");
        if (d <= 1 && end == kNone) end = x;
      }
      u.path = true;
      for (NodeId prev = kNone, cur = end; cur != kNone;) {
        u.nodes.push_back(cur);
        NodeId next = kNone;
        for (NodeId y : t.neighbors(cur))
          if (unit_of[y] == uid && y != prev) next = y;
        prev = cur;
        cur = next;
      }
      const std::size_t k = u.nodes.size();
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<NodeId> up;
        for (NodeId y : t.neighbors(u.nodes[j]))
          if (unit_of[y] != uid && lower(u.nodes[j], y)) up.push_back(y);
        const std::size_t want = k == 1 ? 2 : (j == 0 || j + 1 == k ? 1 : 0);
        if (up.size() != want)
          throw SolverError("compress node " + std::to_string(u.nodes[j]) + " has " + std::to_string(up.size()) +
                            " higher neighbors");
        if (k == 1) {
          u.out_first = up[0];
          u.out_last = up[1];
        } else if (j == 0) {
          u.out_first = up[0];
        } else if (j + 1 == k) {
          u.out_last = up[0];
        }
      }
    }
    units.push_back(std::move(u));
  }

  std::vector<std::uint32_t> order(units.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const NodeId x = units[a].nodes[0], y = units[b].nodes[0];
    if (st.layer(x) == st.layer(y)) return x < y;
    return lower(x, y);
  });

  std::vector<LabelSet> set(t.edge_count(), 0);  // lower-side label-set
  std::vector<std::uint64_t> unit_ready(units.size(), 0);
  std::vector<std::uint64_t> rin(n, 0);
  LabelSetCache cache(spec);
  std::vector<NodeId> inc;
  std::vector<LabelSet> sets;

  auto gather = [&](NodeId x) {
    inc.clear();
    sets.clear();
    for (NodeId y : t.neighbors(x)) {
      if (unit_of[y] == unit_of[x] || !lower(y, x)) continue;
      inc.push_back(y);
      sets.push_back(set[t.edge_between(x, y)]);
    }
  };
  auto path_instance = [&](const Unit& u) {
    PathInstance inst;
    for (NodeId x : u.nodes) {
      gather(x);
      inst.incoming.push_back(as_incoming(sets));
    }
    return inst;
  };

  for (std::uint32_t uid : order) {
    const Unit& u = units[uid];
    std::uint64_t r_unit = 0;
    for (NodeId x : u.nodes) {
      rin[x] = assigned[x];
      for (NodeId y : t.neighbors(x))
        if (unit_of[y] != uid && lower(y, x)) rin[x] = std::max(rin[x], unit_ready[unit_of[y]]);
      r_unit = std::max(r_unit, rin[x]);
    }
    if (!u.path) {
      const NodeId x = u.nodes[0];
      if (u.out_first != kNone) {
        gather(x);
        const LabelSet s = cache.g(sets);
        if (s == 0) throw SolverError("empty label-set at node " + std::to_string(x));
        set[t.edge_between(x, u.out_first)] = s;
        r_unit += 1;
      }
    } else {
      const EndpointSets es = ff.endpoint_sets(path_instance(u));
      if (es.first == 0 || es.last == 0)
        throw SolverError("empty label-set on the path at node " + std::to_string(u.nodes[0]));
      set[t.edge_between(u.nodes.front(), u.out_first)] = es.first;
      set[t.edge_between(u.nodes.back(), u.out_last)] = es.last;
      r_unit += u.nodes.size();
    }
    unit_ready[uid] = r_unit;
  }

  LayeredSolution sol;
  sol.labels.assign(t.edge_count(), {0, 0});
  sol.ready.assign(n, 0);
  sol.decided.assign(n, 0);
  auto put = [&](NodeId x, NodeId y, Label at_x, Label at_y) {
    const std::size_t e = t.edge_between(x, y);
    sol.labels[e][side_of(t, e, x)] = at_x;
    sol.labels[e][side_of(t, e, y)] = at_y;
  };
  auto label_at = [&](NodeId x, NodeId y) {
    const std::size_t e = t.edge_between(x, y);
    return sol.labels[e][side_of(t, e, x)];
  };

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Unit& u = units[*it];
    for (NodeId x : u.nodes) sol.ready[x] = unit_ready[*it];
    if (!u.path) {
      const NodeId x = u.nodes[0];
      gather(x);
      std::optional<Label> out;
      if (u.out_first != kNone) out = label_at(x, u.out_first);
      ChosenLabels ch;
      try {
        ch = choose_labels_single_node(spec, sets, out);
      } catch (const std::logic_error&) {
        throw SolverError("no completion at node " + std::to_string(x));
      }
      for (std::size_t q = 0; q < inc.size(); ++q) put(x, inc[q], ch.near[q], ch.far[q]);
      sol.decided[x] = u.out_first == kNone ? rin[x] : sol.decided[u.out_first] + 1;
    } else {
      const std::size_t k = u.nodes.size();
      const PathInstance inst = path_instance(u);
      const Label a = label_at(u.nodes.front(), u.out_first);
      const Label b = label_at(u.nodes.back(), u.out_last);
      const PathLabeling lab = ff.complete(inst, a, b);
      std::size_t idx = 0;
      for (NodeId x : u.nodes) {
        gather(x);
        for (NodeId y : inc) {
          put(x, y, lab.hidden[idx], lab.incoming[idx]);
          ++idx;
        }
      }
      const std::size_t ic = idx;
      for (std::size_t j = 0; j + 1 < k; ++j)
        put(u.nodes[j], u.nodes[j + 1], lab.hidden[ic + 2 * j], lab.hidden[ic + 2 * j + 1]);
      const std::uint64_t df = sol.decided[u.out_first], dl = sol.decided[u.out_last];
      for (std::size_t j = 0; j < k; ++j) sol.decided[u.nodes[j]] = std::max(df + j + 1, dl + (k - j));
    }
  }
  return sol;
}

// ---- timeline ----

namespace {

struct RandomizedTiming {
  std::vector<std::uint32_t> done_execution;  // per node, 0 if never done
  std::size_t budget = 0;
  std::vector<std::size_t> middle_length;  // per node
};

// Round at which each node knows its final layer.
std::vector<std::uint64_t> assignment_rounds(const Decomposition& d, std::uint64_t t_col,
                                             const RandomizedTiming* rnd) {
  const DecompositionState& st = d.state;
  const std::size_t n = st.node_count();
  const std::uint64_t ell = d.ell;
  const std::size_t top = d.iterations + 2;
  std::vector<std::uint64_t> c(top, 0), p(top, 0);
  std::uint64_t s = d.gamma;
  for (std::uint32_t i = 2; i <= d.iterations; ++i) {
    const IterationTrace& tr = d.trace[i - 1];
    std::uint64_t ci = s + 4 * ell + 9;
    if (rnd)
      ci += 1;
    else if (tr.compress_paths > 0)
      ci += t_col + tr.z_cost;
    c[i] = ci;
    p[i] = ci + d.gamma + 2 * d.b;
    s = p[i];
  }
  c[d.iterations + 1] = s + 4 * ell + 9;

  std::vector<std::uint64_t> a(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    const LayerLabel& l = st.layer(v);
    switch (l.kind) {
      case LayerKind::Rake:
        if (st.promoted(v) && l.j == 1)
          a[v] = p[l.i - 1];
        else if (st.in_n(v))
          a[v] = c[l.i];
        else if (l.i == 1)
          a[v] = st.tree().degree(v) == 0 ? 0 : l.j;
        else
          a[v] = c[l.i] + l.j;
        break;
      case LayerKind::Compress:
        a[v] = c[l.i + 1];
        break;
      case LayerKind::PromotedCompress:
        a[v] = p[l.i];
        break;
      default:
        throw SolverError("free node in a finished decomposition");
    }
  }
  if (rnd) {
    const std::uint64_t per = execution_rounds(d.ell);
    for (const CompressRecord& rec : d.compress) {
      if (!rec.randomized || rec.n_first == rec.n_last) continue;
      for (std::size_t k = rec.n_first; k <= rec.n_last; ++k) {
        const NodeId v = rec.nodes[k];
        if (st.promoted(v) || st.layer(v).kind == LayerKind::PromotedCompress) continue;
        const std::uint32_t ex = rnd->done_execution[v];
        a[v] = c[rec.iteration] + (ex ? ex * per : rnd->budget * per + rnd->middle_length[v]);
      }
    }
  }
  return a;
}

SolveResult finish(const LclSpec& spec, const FeasibleFunction& ff, const Decomposition& d,
                   std::span<const std::uint64_t> a) {
  SolveResult res;
  const LayeredSolution sol = solve_on_layers(spec, ff, d.state, a);
  res.labels = sol.labels;
  res.termination_round = sol.decided;
  for (auto r : res.termination_round) res.max_rounds = std::max(res.max_rounds, r);
  res.iterations = d.iterations;
  res.mark_iteration.resize(d.state.node_count());
  for (NodeId v = 0; v < d.state.node_count(); ++v) res.mark_iteration[v] = d.state.mark_iteration(v);
  res.checker = check_tree_labels(spec, d.state.tree(), res.labels);
  return res;
}

}  // namespace

// ---- deterministic ----

std::uint64_t deterministic_coloring_rounds(std::size_t ell) {
  const std::size_t s = coloring_distance(ell);
  return static_cast<std::uint64_t>(s) * linial_schedule(2 * s, static_cast<unsigned __int128>(1) << 64).size();
}

SolveResult solve_deterministic_avg(const LclSpec& spec, const FeasibleFunction& ff, const Tree& tree,
                                    const SolverConfig& config) {
  const IdAssignment ids = assign_ids(tree.node_count(), config.seed);
  DecompositionParams params;
  params.ell = config.ell;
  const Decomposition d = compute_decomposition(tree, ids, params);
  const std::uint64_t t_col = deterministic_coloring_rounds(config.ell);
  const auto a = assignment_rounds(d, t_col, nullptr);
  SolveResult res = finish(spec, ff, d, a);
  res.coloring_rounds = t_col;
  res.compress_paths = d.compress.size();
  return res;
}

// ---- randomized ----

ElectState make_elect_state(std::size_t length, std::size_t ell) {
  if (length == 0) throw std::invalid_argument("empty middle path");
  if (ell < 1) throw std::invalid_argument("ell must be at least 1");
  ElectState st;
  st.ell = ell;
  st.in_z.assign(length, 0);
  st.done.assign(length, 0);
  st.done_execution.assign(length, 0);
  st.in_z.front() = 1;
  st.in_z.back() = 1;
  return st;
}

std::vector<std::uint8_t> draw_coins(std::size_t length, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::uint8_t> out(length);
  for (auto& c : out) c = coin(rng);
  return out;
}

namespace {

// Old maxima within distance ell, virtual ends included.
std::vector<std::uint8_t> active_nodes(const ElectState& st) {
  const std::size_t len = st.length();
  const auto ell = static_cast<std::ptrdiff_t>(st.ell);
  std::vector<std::uint8_t> act(len);
  std::ptrdiff_t last = -1;
  std::vector<std::ptrdiff_t> prev(len), next(len);
  for (std::size_t p = 0; p < len; ++p) {
    prev[p] = last;
    if (st.in_z[p]) last = static_cast<std::ptrdiff_t>(p);
  }
  last = static_cast<std::ptrdiff_t>(len);
  for (std::size_t p = len; p-- > 0;) {
    next[p] = last;
    if (st.in_z[p]) last = static_cast<std::ptrdiff_t>(p);
  }
  for (std::size_t p = 0; p < len; ++p) {
    const auto q = static_cast<std::ptrdiff_t>(p);
    act[p] = !st.in_z[p] && q - prev[p] > ell && next[p] - q > ell;
  }
  return act;
}

}  // namespace

std::vector<ElectOutcome> elect_outcomes(const ElectState& st, std::span<const std::uint8_t> coins) {
  const std::size_t len = st.length();
  if (coins.size() != len) throw std::invalid_argument("one coin per node expected");
  const auto ell = static_cast<std::ptrdiff_t>(st.ell);
  const auto L = static_cast<std::ptrdiff_t>(len);
  const auto act = active_nodes(st);
  std::vector<std::uint8_t> cand(len), fz(len);
  for (std::size_t p = 0; p < len; ++p) cand[p] = act[p] && coins[p];
  for (std::ptrdiff_t p = 0; p < L; ++p) {
    bool alone = cand[p];
    for (std::ptrdiff_t q = std::max<std::ptrdiff_t>(0, p - ell); alone && q <= std::min(L - 1, p + ell); ++q)
      if (q != p && cand[q]) alone = false;
    fz[p] = st.in_z[p] || alone;
  }
  std::vector<std::ptrdiff_t> prev(len), next(len);
  std::ptrdiff_t last = -1;
  for (std::ptrdiff_t p = 0; p < L; ++p) {
    prev[p] = last;
    if (fz[p]) last = p;
  }
  last = L;
  for (std::ptrdiff_t p = L - 1; p >= 0; --p) {
    next[p] = last;
    if (fz[p]) last = p;
  }
  auto z_done = [&](std::ptrdiff_t z) {
    if (z < 0 || z >= L) return true;
    return z - prev[z] <= 2 * ell + 1 && next[z] - z <= 2 * ell + 1;
  };
  std::vector<ElectOutcome> out(len);
  for (std::ptrdiff_t p = 0; p < L; ++p) {
    out[p].in_z = fz[p];
    out[p].done = fz[p] ? z_done(p) : (z_done(prev[p]) && z_done(next[p]) && next[p] - prev[p] <= 2 * ell + 1);
  }
  return out;
}

ElectExecution apply_execution(ElectState& st, std::span<const std::uint8_t> coins) {
  ElectExecution ex;
  const auto act = active_nodes(st);
  for (std::size_t p = 0; p < st.length(); ++p) {
    ex.active += act[p];
    ex.candidates += act[p] && coins[p];
  }
  const auto out = elect_outcomes(st, coins);
  ++st.executions;
  for (std::size_t p = 0; p < st.length(); ++p) {
    if (out[p].in_z && !st.in_z[p]) {
      st.in_z[p] = 1;
      ++ex.joined;
    }
    if (out[p].done && !st.done[p]) {
      st.done[p] = 1;
      st.done_execution[p] = static_cast<std::uint32_t>(st.executions);
      ++ex.newly_done;
    }
  }
  return ex;
}

ElectExecution elect_maximums(ElectState& st, std::mt19937_64& rng) {
  const auto coins = draw_coins(st.length(), candidate_probability(st.ell), rng);
  return apply_execution(st, coins);
}

namespace {

enum class Tri : std::uint8_t { F, T, U };

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::F || b == Tri::F) return Tri::F;
  if (a == Tri::T && b == Tri::T) return Tri::T;
  return Tri::U;
}
Tri tri_not(Tri a) { return a == Tri::U ? Tri::U : (a == Tri::T ? Tri::F : Tri::T); }
Tri tri_or(Tri a, Tri b) { return tri_not(tri_and(tri_not(a), tri_not(b))); }

// Outcome of one node from the coins in [lo, hi]; coins outside are unknown.
struct PartialElect {
  const ElectState& st;
  std::span<const std::uint8_t> act;
  std::span<const std::uint8_t> coins;
  std::ptrdiff_t lo, hi;

  std::ptrdiff_t len() const { return static_cast<std::ptrdiff_t>(st.length()); }
  Tri cand(std::ptrdiff_t q) const {
    if (!act[q]) return Tri::F;
    if (q < lo || q > hi) return Tri::U;
    return coins[q] ? Tri::T : Tri::F;
  }
  // Final membership; virtual ends count as members.
  Tri fz(std::ptrdiff_t q) const {
    if (q < 0 || q >= len()) return Tri::T;
    if (st.in_z[q]) return Tri::T;
    const auto ell = static_cast<std::ptrdiff_t>(st.ell);
    Tri alone = cand(q);
    for (std::ptrdiff_t r = std::max<std::ptrdiff_t>(0, q - ell); r <= std::min(len() - 1, q + ell); ++r)
      if (r != q) alone = tri_and(alone, tri_not(cand(r)));
    return alone;
  }
  Tri z_done(std::ptrdiff_t z) const {
    if (z < 0 || z >= len()) return Tri::T;
    const auto w = static_cast<std::ptrdiff_t>(2 * st.ell + 1);
    Tri left = Tri::F, right = Tri::F;
    for (std::ptrdiff_t d = 1; d <= w; ++d) {
      left = tri_or(left, fz(z - d));
      right = tri_or(right, fz(z + d));
    }
    return tri_and(fz(z), tri_and(left, right));
  }
  Tri done(std::ptrdiff_t p) const {
    const Tri f = fz(p);
    if (f == Tri::T) return z_done(p);
    if (f == Tri::U) return Tri::U;
    // Segment of at most 2ell nodes bounded by done members on both sides.
    const auto w = static_cast<std::ptrdiff_t>(2 * st.ell + 1);
    std::ptrdiff_t a = 0, b = 0;
    for (std::ptrdiff_t d = 1; d <= w && !a; ++d) {
      const Tri g = fz(p - d);
      if (g == Tri::U) return Tri::U;
      if (g == Tri::T) a = d;
    }
    for (std::ptrdiff_t d = 1; d <= w && !b; ++d) {
      const Tri g = fz(p + d);
      if (g == Tri::U) return Tri::U;
      if (g == Tri::T) b = d;
    }
    if (!a || !b || a + b > w) return Tri::F;
    return tri_and(z_done(p - a), z_done(p + b));
  }
};

struct ElectAlgorithm {
  const ElectState* st = nullptr;
  std::span<const std::uint8_t> act;
  std::span<const std::uint8_t> coins;
  std::uint64_t horizon = 0;

  struct State {
    std::ptrdiff_t lo = 0, hi = 0;
    bool decided = false;
    ElectOutcome outcome;
    std::uint64_t round = 0;
  };
  struct Public {
    std::ptrdiff_t lo = 0, hi = 0;
  };
  struct Output {
    ElectOutcome outcome;
    std::uint64_t round = 0;
  };

  void try_decide(std::uint64_t r, NodeId v, State& s) const {
    if (s.decided) return;
    const PartialElect pe{*st, act, coins, s.lo, s.hi};
    const auto p = static_cast<std::ptrdiff_t>(v);
    const Tri z = pe.fz(p), d = pe.done(p);
    if (z == Tri::U || d == Tri::U) return;
    s.decided = true;
    s.outcome = {z == Tri::T, d == Tri::T};
    s.round = r;
  }
  void init(const NodeContext& ctx, State& s, Emitter<Output>& emit) const {
    s.lo = s.hi = static_cast<std::ptrdiff_t>(ctx.node);
    try_decide(0, ctx.node, s);
    if (horizon == 0) emit({s.outcome, s.round});
  }
  Public publish(const State& s) const { return {s.lo, s.hi}; }
  void step(std::uint64_t r, const NodeContext& ctx, State& s, const NeighborView<Public>& view,
            Emitter<Output>& emit) const {
    for (std::size_t q = 0; q < view.size(); ++q) {
      s.lo = std::min(s.lo, view[q].lo);
      s.hi = std::max(s.hi, view[q].hi);
    }
    try_decide(r, ctx.node, s);
    if (r >= horizon) {
      if (!s.decided) throw SimulationError("elect outcome undetermined after " + std::to_string(r) + " rounds");
      emit({s.outcome, s.round});
    }
  }
};

}  // namespace

ElectEngineRun run_elect_execution(const ElectState& st, std::span<const std::uint8_t> coins) {
  const std::size_t len = st.length();
  if (coins.size() != len) throw std::invalid_argument("one coin per node expected");
  const auto act = active_nodes(st);
  const Tree path = generate_path(len);
  IdAssignment ids(len);
  std::iota(ids.begin(), ids.end(), 1ULL);
  // Every node keeps relaying until the horizon; the decision round is what counts.
  const std::uint64_t horizon = std::min<std::uint64_t>(execution_rounds(st.ell), len);
  ElectAlgorithm alg{&st, act, coins, horizon};
  const auto run = run_simulation(path, ids, alg, 0, std::max<std::uint64_t>(4 * len, horizon + 1));
  ElectEngineRun res;
  for (const auto& o : run.outputs) {
    res.outcomes.push_back(o.outcome);
    res.rounds.push_back(o.round);
    res.max_rounds = std::max(res.max_rounds, o.round);
  }
  return res;
}

CompressRun randomized_compress(std::size_t length, std::size_t ell, std::size_t c_fail, std::size_t n,
                                std::mt19937_64& rng) {
  CompressRun run;
  run.state = make_elect_state(length, ell);
  const std::size_t budget = execution_budget(ell, c_fail, n);
  auto all_done = [&] { return std::all_of(run.state.done.begin(), run.state.done.end(), [](auto x) { return x; }); };
  while (run.state.executions < budget && !all_done()) elect_maximums(run.state, rng);
  for (std::size_t p = 0; p < length; ++p)
    if (run.state.in_z[p]) run.z.push_back(p);
  for (std::size_t q = 1; q < run.z.size(); ++q) {
    const std::size_t seg = run.z[q] - run.z[q - 1] - 1;
    run.segments.push_back(seg);
    if (seg < ell || seg > 2 * ell) run.ok = false;
  }
  if (!all_done()) run.ok = false;
  return run;
}

SolveResult solve_randomized_avg(const LclSpec& spec, const FeasibleFunction& ff, const Tree& tree,
                                 const SolverConfig& config) {
  const std::size_t n = tree.node_count();
  const IdAssignment ids = assign_ids(n, config.seed);
  RandomizedTiming timing;
  timing.done_execution.assign(n, 0);
  timing.middle_length.assign(n, 0);
  timing.budget = execution_budget(config.ell, config.c_fail, n);
  std::size_t paths = 0, failures = 0, executions = 0;
  std::vector<std::size_t> segments;

  DecompositionParams params;
  params.ell = config.ell;
  params.mode = DecompositionMode::Randomized;
  params.elector = [&](std::span<const NodeId> middle, std::uint32_t iteration) {
    std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(ids[middle[0]] ^ (std::uint64_t{iteration} << 48))));
    CompressRun run = randomized_compress(middle.size(), config.ell, config.c_fail, n, rng);
    for (std::size_t k = 0; k < middle.size(); ++k) {
      timing.done_execution[middle[k]] = run.state.done_execution[k];
      timing.middle_length[middle[k]] = middle.size();
    }
    ++paths;
    failures += !run.ok;
    executions = std::max(executions, run.state.executions);
    segments.insert(segments.end(), run.segments.begin(), run.segments.end());
    return run.z;
  };
  const Decomposition d = compute_decomposition(tree, ids, params);
  const auto a = assignment_rounds(d, 0, &timing);
  SolveResult res = finish(spec, ff, d, a);
  res.compress_paths = paths;
  res.failures = failures;
  res.executions = executions;
  res.segment_lengths = std::move(segments);
  return res;
}

// ---- worst-case baseline ----

Decomposition compute_baseline_decomposition(const Tree& tree, const IdAssignment& ids, std::size_t ell) {
  if (ell < 1) throw std::invalid_argument("ell must be at least 1");
  if (ids.size() != tree.node_count()) throw std::invalid_argument("id assignment size mismatch");
  Decomposition d;
  d.state = DecompositionState(tree);
  d.ell = ell;
  d.gamma = 1;
  d.b = 0;
  DecompositionState& st = d.state;
  const std::size_t n = tree.node_count();
  const auto cap = static_cast<std::uint32_t>(10 * std::log2(static_cast<double>(std::max<std::size_t>(n, 1))) + 10);
  for (std::uint32_t i = 1; st.free_count() > 0; ++i) {
    if (i > cap) throw DecompositionError("iteration cap " + std::to_string(cap) + " exceeded");
    orienting_rake(st, ids, i, 1);
    std::size_t paths = 0;
    std::uint64_t zc = 0;
    for (const auto& path : free_degree_two_paths(st)) {
      const std::size_t m = path.size();
      if (m < ell + 1) continue;
      CompressRecord rec;
      rec.iteration = i;
      rec.layer = i;
      if (m <= 2 * ell + 1) {
        rec.nodes = path;
      } else if (m == 2 * ell + 2) {
        rec.nodes.assign(path.begin(), path.end() - 1);
      } else {
        rec.nodes = path;
        std::vector<std::uint64_t> pid(m);
        for (std::size_t k = 0; k < m; ++k) pid[k] = ids[path[k]];
        const PathColoring col = color_path_power(pid, coloring_distance(ell));
        const ZChoice z = choose_z(col.color, pid, ell);
        rec.z = z.z;
        rec.linial_steps = col.linial_steps;
        rec.z_steps = z.steps;
        rec.z_cost = static_cast<std::uint64_t>(2 * ell + 4) * z.steps;
        zc = std::max(zc, rec.z_cost);
      }
      std::vector<std::uint8_t> inz(rec.nodes.size());
      for (std::size_t p : rec.z) inz[p] = 1;
      for (std::size_t k = 0; k < rec.nodes.size(); ++k)
        st.assign(rec.nodes[k], inz[k] ? LayerLabel::rake(i + 1, 1) : LayerLabel::compress(i));
      ++paths;
      d.compress.push_back(std::move(rec));
    }
    d.trace.push_back({i, st.free_count(), st.marked_count(), 0, paths, zc});
    d.iterations = i;
  }
  return d;
}

SolveResult solve_worst_case_baseline(const LclSpec& spec, const FeasibleFunction& ff, const Tree& tree,
                                      const SolverConfig& config) {
  const std::size_t n = tree.node_count();
  const IdAssignment ids = assign_ids(n, config.seed);
  const Decomposition d = compute_baseline_decomposition(tree, ids, config.ell);
  const std::uint64_t t_col = deterministic_coloring_rounds(config.ell);
  const DecompositionState& st = d.state;
  // Iteration i: one rake round, then path detection and, for long paths, coloring and the Z step.
  std::vector<std::uint64_t> rake_at(d.iterations + 2, 0), comp_at(d.iterations + 2, 0);
  std::uint64_t s = 0;
  for (std::uint32_t i = 1; i <= d.iterations; ++i) {
    rake_at[i] = s + 1;
    const IterationTrace& tr = d.trace[i - 1];
    comp_at[i] = rake_at[i] + 2 * config.ell + 3 + (tr.z_cost > 0 || tr.compress_paths > 0 ? t_col + tr.z_cost : 0);
    s = comp_at[i];
  }
  std::vector<std::uint64_t> a(n);
  std::vector<std::uint8_t> is_z(n);
  for (const auto& rec : d.compress)
    for (std::size_t p : rec.z) is_z[rec.nodes[p]] = 1;
  for (NodeId v = 0; v < n; ++v) {
    const LayerLabel& l = st.layer(v);
    if (l.kind == LayerKind::Compress)
      a[v] = comp_at[l.i];
    else if (is_z[v])
      a[v] = comp_at[l.i - 1];
    else
      a[v] = rake_at[l.i];
  }
  SolveResult res = finish(spec, ff, d, a);
  std::fill(res.termination_round.begin(), res.termination_round.end(), res.max_rounds);
  res.coloring_rounds = t_col;
  res.compress_paths = d.compress.size();
  return res;
}

SolveResult solve_diameter_oracle(const LclSpec& spec, const Tree& tree) {
  const BipartiteTree bt = subdivide_edges(tree);
  const DiameterResult dr = solve_diameter(spec, bt);
  SolveResult res;
  const std::size_t n = tree.node_count();
  if (!dr.solvable) {
    res.checker = {false, dr.empty_at, "no solution exists"};
    return res;
  }
  res.labels.resize(tree.edge_count());
  for (std::size_t e = 0; e < tree.edge_count(); ++e)
    res.labels[e] = {dr.labels[bt.half_edges[e][0]], dr.labels[bt.half_edges[e][1]]};
  res.max_rounds = 2 * dr.peel_rounds;
  res.termination_round.assign(n, res.max_rounds);
  res.checker = check_solution(spec, bt, dr.labels);
  return res;
}

}  // namespace lclavg
