#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "lclavg/decomp.hpp"

namespace lclavg {

namespace {

constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

std::tuple<std::uint32_t, int, std::uint32_t> layer_key(const LayerLabel& l) {
  switch (l.kind) {
    case LayerKind::Rake:
      return {l.i, 0, l.j};
    case LayerKind::PromotedCompress:
      return {l.i, 1, 0};
    case LayerKind::Compress:
      return {l.i, 2, 0};
    default:
      throw std::logic_error("free node has no layer");
  }
}

}  // namespace

bool layer_less_than(const LayerLabel& a, const LayerLabel& b) { return layer_key(a) < layer_key(b); }

bool higher_or_free(const LayerLabel& a, const LayerLabel& than) {
  if (a.is_free()) return true;
  if (than.is_free()) return false;
  return layer_less_than(than, a);
}

std::string to_string(const LayerLabel& l) {
  switch (l.kind) {
    case LayerKind::Rake:
      return "R" + std::to_string(l.i) + "." + std::to_string(l.j);
    case LayerKind::PromotedCompress:
      return "P" + std::to_string(l.i);
    case LayerKind::Compress:
      return "C" + std::to_string(l.i);
    default:
      return "free";
  }
}

// ---- state ----

DecompositionState::DecompositionState(const Tree& tree)
    : tree_(&tree),
      layer_(tree.node_count()),
      orient_(tree.edge_count(), Orientation::Unoriented),
      parent_(tree.node_count(), kNone),
      free_deg_(tree.node_count()),
      in_n_(tree.node_count()),
      promoted_(tree.node_count()),
      relaxed_(tree.node_count()),
      mark_iter_(tree.node_count()),
      unm_(tree.node_count(), 1),
      free_count_(tree.node_count()) {
  for (NodeId v = 0; v < tree.node_count(); ++v) free_deg_[v] = static_cast<std::uint32_t>(tree.degree(v));
}

void DecompositionState::assign(NodeId v, LayerLabel l) {
  if (l.is_free()) throw DecompositionError("cannot unassign a node");
  if (layer_[v].is_free()) {
    --free_count_;
    for (NodeId u : tree_->neighbors(v)) --free_deg_[u];
  }
  layer_[v] = l;
}

void DecompositionState::orient(NodeId from, NodeId to) {
  const std::size_t e = tree_->edge_between(from, to);
  if (orient_[e] != Orientation::Unoriented)
    throw DecompositionError("edge " + std::to_string(from) + "-" + std::to_string(to) + " oriented twice");
  if (parent_[to] != kNone)
    throw DecompositionError("node " + std::to_string(to) + " gets a second incoming edge");
  orient_[e] = tree_->edges()[e].first == to ? Orientation::TowardsA : Orientation::TowardsB;
  parent_[to] = from;
  for (NodeId x = from; x != kNone; x = parent_[x]) unm_[x] += unm_[to];
}

std::optional<NodeId> DecompositionState::parent(NodeId v) const {
  if (parent_[v] == kNone) return std::nullopt;
  return parent_[v];
}

std::vector<NodeId> DecompositionState::children(NodeId v) const {
  std::vector<NodeId> out;
  for (NodeId u : tree_->neighbors(v))
    if (parent_[u] == v) out.push_back(u);
  return out;
}

std::size_t DecompositionState::mark_subtree(NodeId v, std::uint32_t iteration) {
  if (marked(v)) return 0;
  // Subtrees of marked nodes are fully marked: assigned nodes never gain children.
  std::vector<NodeId> stack{v};
  std::size_t count = 0;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    if (marked(x)) continue;
    mark_iter_[x] = iteration;
    unm_[x] = 0;
    ++count;
    for (NodeId u : tree_->neighbors(x))
      if (parent_[u] == x) stack.push_back(u);
  }
  for (NodeId x = parent_[v]; x != kNone; x = parent_[x]) unm_[x] -= count;
  marked_count_ += count;
  return count;
}

std::size_t DecompositionState::quality_bfs(NodeId v) const {
  if (marked(v)) return 0;
  std::size_t count = 0;
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    for (NodeId u : tree_->neighbors(x)) {
      if (parent_[u] != x || layer_[u].is_free()) continue;
      if ((x != v || !layer_[v].is_free()) && layer_less_than(layer_[x], layer_[u])) continue;
      ++count;
      stack.push_back(u);
    }
  }
  return count;
}

bool DecompositionState::is_local_max(NodeId v) const {
  if (layer_[v].is_free()) return false;
  for (NodeId u : tree_->neighbors(v))
    if (layer_[u].is_free() || !layer_less_than(layer_[u], layer_[v])) return false;
  return true;
}

// ---- steps ----

namespace {

std::vector<NodeId> free_nodes(const DecompositionState& st) {
  std::vector<NodeId> out;
  out.reserve(st.free_count());
  for (NodeId v = 0; v < st.node_count(); ++v)
    if (st.is_free(v)) out.push_back(v);
  return out;
}

NodeId free_neighbor(const DecompositionState& st, NodeId v, NodeId except = kNone) {
  for (NodeId u : st.tree().neighbors(v))
    if (st.is_free(u) && u != except) return u;
  return kNone;
}

void mark_new_maxima(DecompositionState& st, std::span<const NodeId> nodes, std::uint32_t iteration) {
  for (NodeId v : nodes)
    if (!st.marked(v) && st.is_local_max(v)) st.mark_subtree(v, iteration);
}

// Free nodes tracked across steps so later calls only scan what is still free.
class FreeList {
 public:
  explicit FreeList(const DecompositionState& st) : nodes_(free_nodes(st)) {}
  const std::vector<NodeId>& get(const DecompositionState& st) {
    std::erase_if(nodes_, [&](NodeId v) { return !st.is_free(v); });
    return nodes_;
  }

 private:
  std::vector<NodeId> nodes_;
};

std::vector<NodeId> rake_impl(DecompositionState& st, const IdAssignment& ids, std::uint32_t i, std::size_t gamma,
                              FreeList& fl) {
  const LayerLabel first = LayerLabel::rake(i, 1);
  for (NodeId v : fl.get(st))
    for (NodeId u : st.tree().neighbors(v))
      if (!st.is_free(u) && !layer_less_than(st.layer(u), first))
        throw DecompositionError("rake precondition: free node " + std::to_string(v) + " next to layer " +
                                 to_string(st.layer(u)));
  std::vector<NodeId> assigned;
  for (std::uint32_t j = 1; j <= gamma; ++j) {
    std::vector<NodeId> removed;
    std::vector<NodeId> parents;
    for (NodeId v : fl.get(st)) {
      if (st.free_degree(v) > 1) continue;
      NodeId u = kNone;
      if (st.free_degree(v) == 1) {
        u = free_neighbor(st, v);
        if (st.free_degree(u) == 1 && ids[u] < ids[v]) continue;
      }
      removed.push_back(v);
      parents.push_back(u);
    }
    for (std::size_t k = 0; k < removed.size(); ++k)
      if (parents[k] != kNone) st.orient(parents[k], removed[k]);
    for (NodeId v : removed) st.assign(v, LayerLabel::rake(i, j));
    mark_new_maxima(st, removed, i);
    assigned.insert(assigned.end(), removed.begin(), removed.end());
  }
  return assigned;
}

// Maximal paths of free nodes with exactly two free neighbors, as node sequences.
std::vector<std::vector<NodeId>> degree_two_paths(const DecompositionState& st, const std::vector<NodeId>& free) {
  std::vector<std::uint8_t> seen(st.node_count());
  std::vector<std::vector<NodeId>> paths;
  auto walk = [&](NodeId start, NodeId next, std::vector<NodeId>& out) {
    NodeId prev = start, cur = next;
    while (cur != kNone && st.free_degree(cur) == 2 && !seen[cur]) {
      seen[cur] = 1;
      out.push_back(cur);
      const NodeId nxt = free_neighbor(st, cur, prev);
      prev = cur;
      cur = nxt;
    }
  };
  for (NodeId v : free) {
    if (seen[v] || st.free_degree(v) != 2) continue;
    seen[v] = 1;
    NodeId a = kNone, b = kNone;
    for (NodeId u : st.tree().neighbors(v))
      if (st.is_free(u)) (a == kNone ? a : b) = u;
    std::vector<NodeId> left, right;
    walk(v, a, left);
    walk(v, b, right);
    std::vector<NodeId> p(left.rbegin(), left.rend());
    p.push_back(v);
    p.insert(p.end(), right.begin(), right.end());
    if (p.front() > p.back()) std::reverse(p.begin(), p.end());
    paths.push_back(std::move(p));
  }
  return paths;
}

std::vector<NodeId> compress_impl(DecompositionState& st, const IdAssignment& ids, std::uint32_t i,
                                  const DecompositionParams& params, std::uint32_t iteration,
                                  std::vector<CompressRecord>* records, FreeList& fl) {
  const std::size_t ell = params.ell;
  std::vector<NodeId> assigned;
  for (auto& path : degree_two_paths(st, fl.get(st))) {
    if (path.size() < 4 * ell + 9) continue;
    CompressRecord rec;
    rec.iteration = iteration;
    rec.layer = i;
    rec.nodes.assign(path.begin() + static_cast<std::ptrdiff_t>(ell + 3),
                     path.end() - static_cast<std::ptrdiff_t>(ell + 3));
    rec.slack_first = path[ell + 2];
    rec.slack_last = path[path.size() - ell - 3];
    const std::size_t m = rec.nodes.size();

    if (params.mode == DecompositionMode::Deterministic) {
      std::vector<std::uint64_t> pid(m);
      for (std::size_t k = 0; k < m; ++k) pid[k] = ids[rec.nodes[k]];
      const PathColoring col = color_path_power(pid, coloring_distance(ell));
      const ZChoice zc = choose_z(col.color, pid, ell);
      rec.z = zc.z;
      rec.linial_steps = col.linial_steps;
      rec.z_steps = zc.steps;
      rec.z_cost = static_cast<std::uint64_t>(2 * ell + 4) * zc.steps;
      rec.n_first = rec.z.front();
      rec.n_last = rec.z.back();
    } else {
      rec.randomized = true;
      const std::size_t beta = m - 1;
      if (beta <= 3 * ell + 2) {
        rec.z = {ell + 1};
        rec.n_first = rec.n_last = ell + 1;
      } else {
        rec.n_first = ell + 1;
        rec.n_last = beta - ell - 1;
        if (!params.elector) throw std::invalid_argument("randomized decomposition needs an elector");
        const std::span<const NodeId> middle(rec.nodes.data() + rec.n_first, rec.n_last - rec.n_first + 1);
        auto zpos = params.elector(middle, iteration);
        if (zpos.empty() || zpos.front() != 0 || zpos.back() != middle.size() - 1 ||
            !std::is_sorted(zpos.begin(), zpos.end()))
          throw DecompositionError("elector must return sorted positions including both ends");
        for (std::size_t p : zpos) rec.z.push_back(p + rec.n_first);
        std::vector<std::uint8_t> inz(m);
        for (std::size_t p : rec.z) inz[p] = 1;
        for (std::size_t k = rec.n_first; k <= rec.n_last; ++k)
          if (!inz[k]) st.set_relaxed(rec.nodes[k]);
      }
    }

    st.orient(rec.slack_first, rec.nodes[0]);
    for (std::size_t k = 0; k + 1 < rec.n_first; ++k) st.orient(rec.nodes[k], rec.nodes[k + 1]);
    st.orient(rec.slack_last, rec.nodes[m - 1]);
    for (std::size_t k = m - 1; k > rec.n_last + 1; --k) st.orient(rec.nodes[k], rec.nodes[k - 1]);

    std::vector<std::uint8_t> inz(m);
    for (std::size_t p : rec.z) inz[p] = 1;
    for (std::size_t k = 0; k < m; ++k) {
      st.assign(rec.nodes[k], inz[k] ? LayerLabel::rake(i + 1, 1) : LayerLabel::compress(i));
      assigned.push_back(rec.nodes[k]);
    }
    for (std::size_t k = rec.n_first; k <= rec.n_last; ++k) {
      st.add_to_n(rec.nodes[k]);
      st.mark_subtree(rec.nodes[k], iteration);
    }
    if (records) records->push_back(std::move(rec));
  }
  return assigned;
}

std::vector<NodeId> promote_impl(DecompositionState& st, const IdAssignment& ids, std::uint32_t i, std::size_t b,
                                 std::vector<PromotionRecord>* records, FreeList& fl) {
  std::vector<NodeId> roots = fl.get(st);
  std::sort(roots.begin(), roots.end(), [&](NodeId x, NodeId y) { return ids[x] < ids[y]; });
  std::vector<std::size_t> dist(st.node_count(), SIZE_MAX);
  std::vector<NodeId> from(st.node_count(), kNone);
  std::vector<NodeId> reached;
  std::vector<NodeId> changed;
  for (NodeId r : roots) {
    reached.assign(1, r);
    dist[r] = 0;
    NodeId best = kNone;
    for (std::size_t h = 0; h < reached.size(); ++h) {
      const NodeId x = reached[h];
      if (dist[x] == b) {
        if (best == kNone || st.quality(x) > st.quality(best) ||
            (st.quality(x) == st.quality(best) && ids[x] < ids[best]))
          best = x;
        continue;
      }
      for (NodeId y : st.tree().neighbors(x))
        if (dist[y] == SIZE_MAX && !st.is_free(y)) {
          dist[y] = dist[x] + 1;
          from[y] = x;
          reached.push_back(y);
        }
    }
    for (NodeId x : reached) dist[x] = SIZE_MAX;
    if (best == kNone) continue;

    std::vector<NodeId> interior;
    for (NodeId x = from[best]; x != r; x = from[x]) interior.push_back(x);
    std::reverse(interior.begin(), interior.end());
    bool blocked = st.layer(best).is_compress_form() && st.layer(best).i <= i - 1;
    for (NodeId x : interior)
      if (st.layer(x).is_compress_form() && st.layer(x).i <= i - 1) blocked = true;
    if (blocked) continue;

    for (NodeId x : interior) st.assign(x, LayerLabel::promoted(i));
    st.assign(best, LayerLabel::rake(i + 1, 1));
    st.set_promoted(best);
    PromotionRecord rec{i, r, best, std::move(interior), st.is_local_max(best)};
    if (rec.target_local_max) st.mark_subtree(best, i);
    changed.insert(changed.end(), rec.interior.begin(), rec.interior.end());
    changed.push_back(best);
    if (records) records->push_back(std::move(rec));
  }
  return changed;
}

void check_quality(const DecompositionState& st) {
  for (NodeId v = 0; v < st.node_count(); ++v)
    if (st.quality(v) != st.quality_bfs(v))
      throw DecompositionError("quality mismatch at node " + std::to_string(v) + ": " +
                               std::to_string(st.quality(v)) + " vs " + std::to_string(st.quality_bfs(v)));
}

}  // namespace

std::vector<NodeId> orienting_rake(DecompositionState& st, const IdAssignment& ids, std::uint32_t i,
                                   std::size_t gamma) {
  FreeList fl(st);
  return rake_impl(st, ids, i, gamma, fl);
}

std::vector<NodeId> compress_with_slack(DecompositionState& st, const IdAssignment& ids, std::uint32_t i,
                                        const DecompositionParams& params, std::uint32_t iteration,
                                        std::vector<CompressRecord>* records) {
  FreeList fl(st);
  return compress_impl(st, ids, i, params, iteration, records, fl);
}

std::vector<NodeId> promote_if_possible(DecompositionState& st, const IdAssignment& ids, std::uint32_t i,
                                        std::size_t b, std::vector<PromotionRecord>* records) {
  FreeList fl(st);
  return promote_impl(st, ids, i, b, records, fl);
}

std::vector<std::vector<NodeId>> free_degree_two_paths(const DecompositionState& st) {
  return degree_two_paths(st, free_nodes(st));
}

ZChoice choose_z(std::span<const std::uint64_t> colors, std::span<const std::uint64_t> ids, std::size_t ell) {
  const std::size_t m = colors.size();
  const std::size_t lo = ell + 1, hi = 2 * ell + 1, open = 2 * ell + 3;
  const std::size_t radius = 2 * ell + 4;
  std::vector<std::uint8_t> inz(m);
  auto gap_left = [&](std::size_t x) {
    std::size_t g = 0;
    while (g < open && g < x && !inz[x - g - 1]) ++g;
    return g;
  };
  auto gap_right = [&](std::size_t x) {
    std::size_t g = 0;
    while (g < open && x + g + 1 < m && !inz[x + g + 1]) ++g;
    return g;
  };
  auto valid = [&](std::size_t g) { return (g >= lo && g <= hi) || g >= open; };

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::tie(colors[a], ids[a]) < std::tie(colors[b], ids[b]); });

  ZChoice res;
  std::vector<std::size_t> best(m, 0);
  std::vector<std::pair<std::size_t, std::size_t>> group;  // (position, step)
  for (;;) {
    bool any_open = false;
    for (std::size_t x = 0; x < m; ++x)
      if (!inz[x] && gap_left(x) + gap_right(x) + 1 >= open) any_open = true;
    if (!any_open) break;
    ++res.passes;
    if (res.passes > m + 1) throw DecompositionError("Z computation does not converge");
    for (std::size_t k = 0; k < m;) {
      std::size_t e = k;
      while (e < m && colors[order[e]] == colors[order[k]]) ++e;
      group.clear();
      for (std::size_t t = k; t < e; ++t) {
        const std::size_t x = order[t];
        if (inz[x]) continue;
        const std::size_t gl = gap_left(x), gr = gap_right(x);
        if (gl + gr + 1 < open) continue;
        std::size_t step = 0;
        for (std::size_t y = x >= radius ? x - radius : 0; y <= std::min(m - 1, x + radius); ++y)
          step = std::max(step, best[y]);
        group.emplace_back(x, step + 1);
        if (valid(gl) && valid(gr)) inz[x] = 1;
      }
      for (auto [x, s] : group) {
        best[x] = std::max(best[x], s);
        res.steps = std::max(res.steps, s);
      }
      k = e;
    }
  }
  for (std::size_t x = 0; x < m; ++x)
    if (inz[x]) res.z.push_back(x);
  // Every gap, including the two boundary gaps, must be final.
  std::size_t prev = SIZE_MAX;
  for (std::size_t k = 0; k <= res.z.size(); ++k) {
    const std::size_t next = k < res.z.size() ? res.z[k] : m;
    const std::size_t g = next - (prev == SIZE_MAX ? 0 : prev + 1);
    if (g < lo || g > hi) throw DecompositionError("Z computation left a gap of " + std::to_string(g));
    prev = next;
  }
  return res;
}

Decomposition compute_decomposition(const Tree& tree, const IdAssignment& ids, const DecompositionParams& params,
                                    const DecompositionHook& hook) {
  if (params.ell < 1) throw std::invalid_argument("ell must be at least 1");
  if (ids.size() != tree.node_count()) throw std::invalid_argument("id assignment size mismatch");
  if (params.mode == DecompositionMode::Randomized && !params.elector)
    throw std::invalid_argument("randomized decomposition needs an elector");
  Decomposition d;
  d.state = DecompositionState(tree);
  d.ell = params.ell;
  d.b = params.ell + 2;
  d.gamma = params.ell + 3;
  const std::size_t n = tree.node_count();
  const auto cap = static_cast<std::uint32_t>(10 * std::log2(static_cast<double>(std::max<std::size_t>(n, 1))) + 10);
  DecompositionState& st = d.state;
  FreeList fl(st);

  auto after = [&](DecompositionStep step, std::uint32_t it) {
    if (params.check_quality) check_quality(st);
    if (hook) hook(st, step, it);
  };
  auto record = [&](std::uint32_t it, std::size_t paths, std::uint64_t zc) {
    d.trace.push_back({it, st.free_count(), st.marked_count(), d.promotions.size(), paths, zc});
  };

  rake_impl(st, ids, 1, d.gamma, fl);
  after(DecompositionStep::Rake, 1);
  record(1, 0, 0);
  d.iterations = 1;
  for (std::uint32_t i = 2; st.free_count() > 0; ++i) {
    if (i > cap) throw DecompositionError("iteration cap " + std::to_string(cap) + " exceeded");
    const std::size_t before = d.compress.size();
    compress_impl(st, ids, i - 1, params, i, &d.compress, fl);
    after(DecompositionStep::Compress, i);
    rake_impl(st, ids, i, d.gamma, fl);
    after(DecompositionStep::Rake, i);
    promote_impl(st, ids, i, d.b, &d.promotions, fl);
    after(DecompositionStep::Promote, i);
    std::uint64_t zc = 0;
    for (std::size_t k = before; k < d.compress.size(); ++k) zc = std::max(zc, d.compress[k].z_cost);
    record(i, d.compress.size() - before, zc);
    d.iterations = i;
  }
  return d;
}

// ---- validation ----

Verdict validate_partial_decomposition(const DecompositionState& st, std::size_t gamma, std::size_t ell) {
  const Tree& t = st.tree();
  const std::size_t n = st.node_count();
  auto fail = [](NodeId v, std::string msg) { return Verdict{false, v, std::move(msg)}; };

  // Property 3.
  for (NodeId v = 0; v < n; ++v) {
    if (!st.layer(v).is_rake()) continue;
    std::size_t up = 0;
    for (NodeId u : t.neighbors(v)) {
      if (st.layer(u) == st.layer(v))
        return fail(v, "property 3: node " + std::to_string(v) + " and " + std::to_string(u) + " share sublayer " +
                           to_string(st.layer(v)));
      if (higher_or_free(st.layer(u), st.layer(v))) ++up;
    }
    if (up > 1) return fail(v, "property 3: node " + std::to_string(v) + " has " + std::to_string(up) +
                                   " higher or free neighbors");
  }

  // Components of the layers: rake layers group all sublayers of one index.
  auto same_component = [&](NodeId a, NodeId b) {
    const auto &la = st.layer(a), &lb = st.layer(b);
    if (la.is_free() || lb.is_free()) return false;
    if (la.is_rake() && lb.is_rake()) return la.i == lb.i;
    return la == lb;
  };
  std::vector<std::uint8_t> seen(n);
  std::vector<NodeId> comp;
  std::vector<std::size_t> dist(n, SIZE_MAX);
  auto farthest = [&](NodeId src) {
    std::vector<NodeId> q{src};
    dist[src] = 0;
    NodeId far = src;
    for (std::size_t h = 0; h < q.size(); ++h) {
      const NodeId x = q[h];
      if (dist[x] > dist[far]) far = x;
      for (NodeId y : t.neighbors(x))
        if (dist[y] == SIZE_MAX && same_component(x, y)) {
          dist[y] = dist[x] + 1;
          q.push_back(y);
        }
    }
    const std::size_t d = dist[far];
    for (NodeId x : q) dist[x] = SIZE_MAX;
    return std::pair{far, d};
  };

  for (NodeId s = 0; s < n; ++s) {
    if (seen[s] || st.is_free(s)) continue;
    comp.assign(1, s);
    seen[s] = 1;
    for (std::size_t h = 0; h < comp.size(); ++h)
      for (NodeId y : t.neighbors(comp[h]))
        if (!seen[y] && same_component(comp[h], y)) {
          seen[y] = 1;
          comp.push_back(y);
        }
    auto outside_up = [&](NodeId v) {
      std::size_t up = 0;
      for (NodeId u : t.neighbors(v))
        if (!same_component(v, u) && higher_or_free(st.layer(u), st.layer(v))) ++up;
      return up;
    };

    if (st.layer(s).is_rake()) {
      std::size_t tops = 0;
      for (NodeId v : comp)
        if (outside_up(v) > 0) ++tops;
      if (tops > 1)
        return fail(s, "property 2: rake component of node " + std::to_string(s) + " has " + std::to_string(tops) +
                           " nodes with higher or free neighbors");
      const auto [far, d0] = farthest(s);
      const auto [far2, diam] = farthest(far);
      (void)d0;
      (void)far2;
      if (diam > 2 * gamma)
        return fail(s, "property 2: rake component of node " + std::to_string(s) + " has diameter " +
                           std::to_string(diam));
      continue;
    }

    bool relaxed = false;
    for (NodeId v : comp) relaxed = relaxed || st.relaxed(v);
    std::vector<NodeId> ends;
    for (NodeId v : comp) {
      std::size_t inside = 0;
      for (NodeId u : t.neighbors(v))
        if (same_component(v, u)) ++inside;
      if (inside > 2) return fail(v, "property 1: compress component of node " + std::to_string(s) + " is not a path");
      if (inside <= 1) ends.push_back(v);
    }
    if (!relaxed && (comp.size() < ell + 1 || comp.size() > 2 * ell + 1))
      return fail(s, "property 1: compress component of node " + std::to_string(s) + " has " +
                         std::to_string(comp.size()) + " nodes");
    for (NodeId v : comp) {
      const bool end = std::find(ends.begin(), ends.end(), v) != ends.end();
      const std::size_t up = outside_up(v);
      if (comp.size() == 1) {
        if (up != 2) return fail(v, "property 1: single-node compress component needs two higher neighbors");
      } else if (end ? up != 1 : up != 0) {
        return fail(v, "property 1: node " + std::to_string(v) + " has " + std::to_string(up) +
                           " higher or free neighbors");
      }
    }
  }
  return {};
}

std::vector<NodeId> shallow_compress_nodes(const DecompositionState& st, std::uint32_t i, std::size_t gamma) {
  const Tree& t = st.tree();
  std::vector<std::size_t> dist(st.node_count(), SIZE_MAX);
  std::vector<NodeId> q;
  for (NodeId v = 0; v < st.node_count(); ++v)
    if (st.is_free(v)) {
      dist[v] = 0;
      q.push_back(v);
    }
  std::vector<NodeId> out;
  for (std::size_t h = 0; h < q.size(); ++h) {
    const NodeId x = q[h];
    if (st.layer(x) == LayerLabel::compress(i)) out.push_back(x);
    if (dist[x] + 1 >= gamma) continue;
    for (NodeId y : t.neighbors(x))
      if (dist[y] == SIZE_MAX) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string trace_csv(const std::vector<IterationTrace>& trace) {
  std::ostringstream os;
  os << "iteration,free_count,marked_count,promoted_count\n";
  for (const auto& r : trace)
    os << r.iteration << ',' << r.free_count << ',' << r.marked_count << ',' << r.promoted_count << '\n';
  return os.str();
}

std::string state_dump(const DecompositionState& st) {
  std::ostringstream os;
  for (NodeId v = 0; v < st.node_count(); ++v) os << v << ' ' << to_string(st.layer(v)) << '\n';
  return os.str();
}

}  // namespace lclavg
