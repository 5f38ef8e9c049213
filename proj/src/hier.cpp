#include <algorithm>
#include <cmath>
#include <numeric>

#include "lclavg/solvers.hpp"

namespace lclavg {

char to_char(HierLabel l) {
  switch (l) {
    case HierLabel::W:
      return 'W';
    case HierLabel::B:
      return 'B';
    case HierLabel::E:
      return 'E';
    default:
      return 'D';
  }
}

std::vector<std::uint32_t> compute_levels_oracle(const Tree& tree, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const std::size_t n = tree.node_count();
  std::vector<std::uint32_t> level(n, 0);
  std::vector<std::size_t> rem(n);
  for (NodeId v = 0; v < n; ++v) rem[v] = tree.degree(v);
  for (std::uint32_t i = 1; i <= k; ++i) {
    std::vector<NodeId> peel;
    for (NodeId v = 0; v < n; ++v)
      if (level[v] == 0 && rem[v] <= 2) peel.push_back(v);
    for (NodeId v : peel) level[v] = i;
    for (NodeId v : peel)
      for (NodeId u : tree.neighbors(v)) --rem[u];
  }
  for (auto& l : level)
    if (l == 0) l = static_cast<std::uint32_t>(k + 1);
  return level;
}

void LevelAlgorithm::init(const NodeContext&, State&, Emitter<Output>&) const {}

void LevelAlgorithm::step(std::uint64_t r, const NodeContext&, State& st, const NeighborView<Public>& view,
                          Emitter<Output>& emit) const {
  if (r > k) {
    st.level = static_cast<std::uint32_t>(k + 1);
    emit(st.level);
    return;
  }
  std::size_t unleveled = 0;
  for (std::size_t p = 0; p < view.size(); ++p) unleveled += view[p] == 0;
  if (unleveled <= 2) {
    st.level = static_cast<std::uint32_t>(r);
    emit(st.level);
  }
}

RunResult<std::uint32_t> compute_levels(const Tree& tree, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const std::size_t n = tree.node_count();
  IdAssignment ids(n);
  std::iota(ids.begin(), ids.end(), 1ULL);
  return run_simulation(tree, ids, LevelAlgorithm{k}, 0, std::max<std::uint64_t>(4 * n, k + 2));
}

std::vector<double> phase_gammas(std::size_t n, std::size_t k) {
  if (k < 1 || k > 30) throw std::invalid_argument("k out of range");
  const double denom = std::ldexp(1.0, static_cast<int>(k)) - 1.0;
  std::vector<double> g;
  for (std::size_t i = 1; i <= k; ++i)
    g.push_back(std::pow(static_cast<double>(n), std::ldexp(1.0, static_cast<int>(i - 1)) / denom));
  return g;
}

namespace {

HierResult run_phases(const Tree& tree, std::size_t k, const std::vector<std::uint64_t>& budget) {
  const std::size_t n = tree.node_count();
  HierResult res;
  res.levels = compute_levels(tree, k).outputs;
  res.labels.assign(n, HierLabel::D);
  res.termination_round.assign(n, 0);
  res.phase_budget = budget;
  const auto& level = res.levels;
  for (NodeId v = 0; v < n; ++v)
    if (level[v] == k + 1) {
      res.labels[v] = HierLabel::E;
      res.termination_round[v] = k + 1;
    }

  std::uint64_t start = k + 1;
  std::vector<std::uint8_t> part(n), seen(n);
  double prior = 1.0;
  for (std::uint32_t i = 1; i <= k; ++i) {
    const std::uint64_t t = budget[i - 1];
    std::size_t participants = 0;
    for (NodeId v = 0; v < n; ++v) {
      if (level[v] != i) continue;
      bool e = false;
      for (NodeId u : tree.neighbors(v))
        e = e || (level[u] < i && res.labels[u] != HierLabel::D);
      if (e) {
        res.labels[v] = HierLabel::E;
        res.termination_round[v] = start + 1;
      } else {
        part[v] = 1;
        ++participants;
      }
    }
    auto next_in_path = [&](NodeId x, NodeId prev) {
      for (NodeId u : tree.neighbors(x))
        if (u != prev && part[u] && level[u] == i) return u;
      return std::numeric_limits<NodeId>::max();
    };
    auto path_degree = [&](NodeId x) {
      std::size_t d = 0;
      for (NodeId u : tree.neighbors(x)) d += part[u] && level[u] == i;
      return d;
    };
    for (NodeId v = 0; v < n; ++v) {
      if (!part[v] || level[v] != i || seen[v] || path_degree(v) > 1) continue;
      std::vector<NodeId> path;
      for (NodeId prev = std::numeric_limits<NodeId>::max(), cur = v; cur != std::numeric_limits<NodeId>::max();) {
        seen[cur] = 1;
        path.push_back(cur);
        const NodeId nx = next_in_path(cur, prev);
        prev = cur;
        cur = nx;
      }
      const std::size_t len = path.size();
      for (std::size_t j = 0; j < len; ++j) {
        const std::size_t left = j, right = len - 1 - j;
        if (len <= t) {
          res.labels[path[j]] = j % 2 ? HierLabel::B : HierLabel::W;
          res.termination_round[path[j]] = start + 1 + std::max(left, right);
        } else {
          std::uint64_t r = 0;
          while (std::min<std::uint64_t>(r, left) + std::min<std::uint64_t>(r, right) + 1 <= t) ++r;
          res.labels[path[j]] = HierLabel::D;
          res.termination_round[path[j]] = start + 1 + r;
        }
      }
      if (len > t && i == k) res.level_k_decline = std::max(res.level_k_decline.value_or(0), len);
    }
    for (NodeId v = 0; v < n; ++v)
      if (part[v] && level[v] == i && !seen[v]) throw SolverError("level " + std::to_string(i) + " forms a cycle");
    res.phase_participants.push_back(participants);
    if (static_cast<double>(participants) * prior > static_cast<double>(n)) res.participation_bound_ok = false;
    prior *= static_cast<double>(t) / 2.0;
    start += 1 + t;
  }
  for (auto r : res.termination_round) res.max_rounds = std::max(res.max_rounds, r);
  res.checker = check_hierarchical_2half(tree, k, res.labels);
  return res;
}

}  // namespace

HierResult solve_hierarchical_2half(const Tree& tree, std::size_t k, const SolverConfig& config) {
  std::vector<std::uint64_t> budget;
  for (double g : phase_gammas(tree.node_count(), k))
    budget.push_back(static_cast<std::uint64_t>(std::ceil(config.c_phase * g)));
  return run_phases(tree, k, budget);
}

HierResult solve_hierarchical_baseline(const Tree& tree, std::size_t k, const SolverConfig& config) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const double g = std::pow(static_cast<double>(tree.node_count()), 1.0 / static_cast<double>(k));
  const std::vector<std::uint64_t> budget(k, static_cast<std::uint64_t>(std::ceil(config.c_phase * g)));
  HierResult res = run_phases(tree, k, budget);
  std::uint64_t end = k + 1;
  for (auto t : budget) end += 1 + t;
  res.max_rounds = end;
  std::fill(res.termination_round.begin(), res.termination_round.end(), end);
  return res;
}

Verdict check_hierarchical_2half(const Tree& tree, std::size_t k, std::span<const HierLabel> labels) {
  const std::size_t n = tree.node_count();
  if (labels.size() != n) return {false, std::nullopt, "one label per node expected"};
  const auto level = compute_levels_oracle(tree, k);
  auto fail = [](NodeId v, std::string msg) { return Verdict{false, v, std::move(msg)}; };
  for (NodeId v = 0; v < n; ++v) {
    const std::uint32_t li = level[v];
    const HierLabel l = labels[v];
    if (li == 1 && l == HierLabel::E) return fail(v, "level 1 node labeled E");
    if (li == k + 1 && l != HierLabel::E) return fail(v, "top level node not labeled E");
    if (li == k && l == HierLabel::D) return fail(v, "level k node labeled D");
    if (li >= 2 && li <= k) {
      bool lower_decided = false;
      for (NodeId u : tree.neighbors(v)) lower_decided = lower_decided || (level[u] < li && labels[u] != HierLabel::D);
      if (lower_decided != (l == HierLabel::E))
        return fail(v, lower_decided ? "node must be E next to a decided lower level" : "E without a decided lower neighbor");
    }
    if (li <= k && (l == HierLabel::W || l == HierLabel::B))
      for (NodeId u : tree.neighbors(v))
        if (level[u] == li && (labels[u] == l || labels[u] == HierLabel::D))
          return fail(v, std::string("same level neighbor of ") + to_char(l) + " is " + to_char(labels[u]));
  }
  return {};
}

}  // namespace lclavg
