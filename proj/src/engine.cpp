#include <algorithm>
#include <map>
#include <mutex>

#include "lclavg/engine.hpp"

namespace lclavg {

namespace {

using u128 = unsigned __int128;

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t p = 2; p * p <= x; ++p)
    if (x % p == 0) return false;
  return true;
}

std::uint64_t next_prime(std::uint64_t x) {
  while (!is_prime(x)) ++x;
  return x;
}

u128 saturating_pow(std::uint64_t base, unsigned e) {
  const u128 cap = static_cast<u128>(1) << 100;
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    r *= base;
    if (r > cap) return cap;
  }
  return r;
}

// Smallest r with r^e >= m.
std::uint64_t ceil_root(u128 m, unsigned e) {
  std::uint64_t lo = 1, hi = 1ULL << 33;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (saturating_pow(mid, e) >= m)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

namespace {

std::vector<LinialStep> compute_schedule(std::uint64_t max_degree, u128 palette) {
  std::vector<LinialStep> steps;
  if (max_degree == 0) return steps;
  for (;;) {
    LinialStep best;
    for (unsigned d = 1; d < 64; ++d) {
      const std::uint64_t lower = max_degree * d + 1;
      const std::uint64_t q = next_prime(std::max({lower, ceil_root(palette, d + 1), std::uint64_t{2}}));
      if (static_cast<u128>(q) * q >= palette) continue;
      if (best.q == 0 || q < best.q) best = {q, d, 0, q * q};
    }
    if (best.q == 0) break;
    best.palette_in = palette > std::numeric_limits<std::uint64_t>::max()
                          ? std::numeric_limits<std::uint64_t>::max()
                          : static_cast<std::uint64_t>(palette);
    steps.push_back(best);
    palette = best.palette_out;
  }
  return steps;
}

}  // namespace

std::vector<LinialStep> linial_schedule(std::uint64_t max_degree, u128 palette) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, u128>, std::vector<LinialStep>> memo;
  std::lock_guard lock(mu);
  auto it = memo.find({max_degree, palette});
  if (it == memo.end()) it = memo.emplace(std::pair{max_degree, palette}, compute_schedule(max_degree, palette)).first;
  return it->second;
}

std::uint64_t linial_eval(const LinialStep& st, std::uint64_t color, std::uint64_t x) {
  // Digits of color in base q are the coefficients, highest first for Horner.
  std::uint64_t digits[64];
  for (unsigned i = 0; i <= st.d; ++i) {
    digits[i] = color % st.q;
    color /= st.q;
  }
  u128 acc = 0;
  for (int i = static_cast<int>(st.d); i >= 0; --i) acc = (acc * x + digits[i]) % st.q;
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t power_graph_degree_bound(std::size_t delta, std::size_t s) {
  if (delta <= 1) return delta;
  std::uint64_t total = 0, layer = delta;
  for (std::size_t j = 1; j <= s; ++j) {
    total += layer;
    if (total > (1ULL << 40)) throw SimulationError("power graph degree too large");
    layer *= (delta - 1);
  }
  return total;
}

DistanceColoring compute_distance_coloring(const Tree& tree, const IdAssignment& ids, std::size_t s) {
  if (s < 1) throw std::invalid_argument("s must be positive");
  const std::size_t n = tree.node_count();
  if (ids.size() != n) throw SimulationError("id assignment size mismatch");
  {
    std::vector<std::uint64_t> sorted(ids);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw SimulationError("duplicate ids");
  }
  DistanceColoring res;
  res.s = s;
  res.rounds.assign(n, 0);
  if (n == 1) {
    res.color = {0};
    res.palette_size = 1;
    return res;
  }
  const std::uint64_t D = power_graph_degree_bound(tree.max_degree(), s);
  res.conflict_degree = D;

  // Conflict lists: all nodes within distance s.
  std::vector<std::vector<NodeId>> ball(n);
  std::vector<std::size_t> dist(n, SIZE_MAX);
  std::vector<NodeId> seen;
  for (NodeId v = 0; v < n; ++v) {
    seen.assign(1, v);
    dist[v] = 0;
    for (std::size_t h = 0; h < seen.size(); ++h) {
      const NodeId x = seen[h];
      if (dist[x] == s) continue;
      for (NodeId y : tree.neighbors(x))
        if (dist[y] == SIZE_MAX) {
          dist[y] = dist[x] + 1;
          seen.push_back(y);
        }
    }
    for (NodeId x : seen) dist[x] = SIZE_MAX;
    ball[v].assign(seen.begin() + 1, seen.end());
  }
  auto nbrs = [&](std::size_t v, auto&& f) {
    for (NodeId u : ball[v]) f(u);
  };

  std::vector<std::uint64_t> colors(ids.begin(), ids.end());
  const auto schedule = linial_schedule(D, static_cast<u128>(1) << 64);
  for (const auto& st : schedule) colors = linial_apply(st, colors, nbrs);
  res.linial_steps = schedule.size();
  std::uint64_t palette = schedule.empty() ? std::numeric_limits<std::uint64_t>::max()
                                           : schedule.back().palette_out;

  if (palette > D + 1) {
    if (palette > (1ULL << 32)) throw SimulationError("palette too large for greedy reduction");
    std::vector<std::vector<NodeId>> by_color(palette);
    for (NodeId v = 0; v < n; ++v) by_color[colors[v]].push_back(v);
    std::vector<std::uint8_t> used(D + 1);
    for (std::uint64_t c = palette - 1; c >= D + 1; --c) {
      for (NodeId v : by_color[c]) {
        std::fill(used.begin(), used.end(), 0);
        for (NodeId u : ball[v])
          if (colors[u] <= D) used[colors[u]] = 1;
        std::uint64_t pick = 0;
        while (used[pick]) ++pick;
        colors[v] = pick;
      }
      ++res.greedy_steps;
    }
    palette = D + 1;
  }
  res.color = std::move(colors);
  res.palette_size = palette;
  const std::uint64_t r = s * (res.linial_steps + res.greedy_steps);
  std::fill(res.rounds.begin(), res.rounds.end(), r);
  return res;
}

PathColoring color_path_power(std::span<const std::uint64_t> ids, std::size_t s) {
  PathColoring res;
  res.color.assign(ids.begin(), ids.end());
  if (ids.size() <= 1) {
    res.color.assign(ids.size(), 0);
    res.palette_size = 1;
    return res;
  }
  const std::size_t len = ids.size();
  auto nbrs = [&](std::size_t v, auto&& f) {
    const std::size_t lo = v >= s ? v - s : 0, hi = std::min(len - 1, v + s);
    for (std::size_t u = lo; u <= hi; ++u)
      if (u != v) f(u);
  };
  const auto schedule = linial_schedule(2 * s, static_cast<u128>(1) << 64);
  for (const auto& st : schedule) res.color = linial_apply(st, res.color, nbrs);
  res.linial_steps = schedule.size();
  res.palette_size = schedule.empty() ? 0 : schedule.back().palette_out;
  return res;
}

bool is_distance_coloring(const Tree& tree, std::span<const std::uint64_t> colors, std::size_t s) {
  const std::size_t n = tree.node_count();
  std::vector<std::size_t> dist(n, SIZE_MAX);
  std::vector<NodeId> seen;
  for (NodeId v = 0; v < n; ++v) {
    seen.assign(1, v);
    dist[v] = 0;
    bool ok = true;
    for (std::size_t h = 0; h < seen.size(); ++h) {
      const NodeId x = seen[h];
      if (x != v && colors[x] == colors[v]) ok = false;
      if (dist[x] == s) continue;
      for (NodeId y : tree.neighbors(x))
        if (dist[y] == SIZE_MAX) {
          dist[y] = dist[x] + 1;
          seen.push_back(y);
        }
    }
    for (NodeId x : seen) dist[x] = SIZE_MAX;
    if (!ok) return false;
  }
  return true;
}

}  // namespace lclavg
