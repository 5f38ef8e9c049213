#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lclavg/bench.hpp"
#include "lclavg/decomp.hpp"
#include "lclavg/lcl.hpp"
#include "lclavg/solvers.hpp"
#include "support.hpp"

using namespace lclavg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int g_failed = 0;

void report(int id, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), s);
  std::fflush(stdout);
  if (!o.pass) ++g_failed;
}

const LclSpec& col_spec() {
  static const LclSpec spec = three_coloring_spec(4);
  return spec;
}

const ThreeColoringFeasible& col_ff() {
  static const ThreeColoringFeasible ff(col_spec());
  return ff;
}

struct NamedTree {
  std::string name;
  Tree tree;
  std::uint64_t seed;
};

std::vector<NamedTree> decomposition_corpus() {
  std::vector<NamedTree> out;
  const std::size_t sizes[] = {100, 1000, 10000, 100000};
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t n = sizes[i % 4];
    out.push_back({"random n=" + std::to_string(n) + " seed=" + std::to_string(i), generate_random_tree(n, 4, i), i});
  }
  for (std::size_t n : {100, 1000, 10000, 100000, 31})
    out.push_back({"path n=" + std::to_string(n), generate_path(n), n});
  for (std::size_t d : {3, 6, 9, 12, 16})
    out.push_back({"binary depth=" + std::to_string(d), generate_complete_tree(2, d), d});
  return out;
}

Outcome criteria_1_and_2(Outcome& decay) {
  constexpr std::size_t ell = 2;
  std::size_t steps = 0, violations = 0, decay_bad = 0, instances = 0;
  std::string first, first_decay;
  for (const auto& inst : decomposition_corpus()) {
    ++instances;
    const IdAssignment ids = assign_ids(inst.tree.node_count(), inst.seed);
    DecompositionParams p;
    p.ell = ell;
    const Decomposition d =
        compute_decomposition(inst.tree, ids, p, [&](const DecompositionState& st, DecompositionStep, std::uint32_t) {
          ++steps;
          const Verdict v = validate_partial_decomposition(st, ell + 3, ell);
          if (!v.ok && violations++ == 0) first = inst.name + ": " + v.message;
        });
    const std::size_t n = inst.tree.node_count();
    for (std::size_t m = 1; 5 * m <= d.trace.size(); ++m) {
      const std::size_t free = d.trace[5 * m - 1].free_count;
      if (free * (std::size_t{1} << std::min<std::size_t>(m, 63)) > n && decay_bad++ == 0)
        first_decay = inst.name + " m=" + std::to_string(m) + " free=" + std::to_string(free);
    }
  }
  std::ostringstream a, b;
  a << instances << " instances, " << steps << " validated steps, " << violations << " violations";
  if (violations) a << " (first: " << first << ")";
  b << instances << " instances, " << decay_bad << " instances above n/2^m";
  if (decay_bad) b << " (first: " << first_decay << ")";
  decay = {decay_bad == 0, b.str()};
  return {violations == 0, a.str()};
}

Outcome criterion_3() {
  SolverConfig cfg;
  std::ostringstream os;
  bool pass = true;
  for (Family fam : {Family::Path, Family::Complete}) {
    std::vector<SolveResult> runs;
    std::vector<std::size_t> ns;
    for (std::size_t n : {std::size_t{1} << 10, std::size_t{1} << 14, std::size_t{1} << 18}) {
      const Tree t = make_instance(fam, n, 1);
      ns.push_back(t.node_count());
      runs.push_back(solve_deterministic_avg(col_spec(), col_ff(), t, cfg));
    }
    bool checker = true;
    for (const auto& r : runs) checker = checker && r.checker.ok;
    const double a0 = node_averaged_complexity(std::span<const std::uint64_t>(runs.front().termination_round)).to_double();
    const double a2 = node_averaged_complexity(std::span<const std::uint64_t>(runs.back().termination_round)).to_double();
    const double avg_ratio = a2 / a0;
    const double max_ratio = static_cast<double>(runs.back().max_rounds) / static_cast<double>(runs.front().max_rounds);
    const bool ok_b = avg_ratio <= 1.3, ok_c = max_ratio >= 1.6;
    pass = pass && checker && ok_b && ok_c;
    os << to_string(fam) << ": (a) " << (checker ? "ok" : "reject") << ", avg";
    for (std::size_t i = 0; i < runs.size(); ++i)
      os << ' ' << node_averaged_complexity(std::span<const std::uint64_t>(runs[i].termination_round)).to_double();
    os << " (b) ratio " << avg_ratio << (ok_b ? " ok" : " > 1.3") << ", max";
    for (const auto& r : runs) os << ' ' << r.max_rounds;
    os << " (c) ratio " << max_ratio << (ok_c ? " ok" : " < 1.6") << "; ";
  }
  return {pass, os.str()};
}

Outcome criterion_4() {
  SolverConfig cfg;
  std::ostringstream os;
  bool pass = true;
  for (Family fam : {Family::Path, Family::Complete}) {
    double mean[2] = {0, 0};
    std::size_t rejects = 0, bad_segments = 0, idx = 0;
    for (std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 18}) {
      const Tree t = make_instance(fam, n, 1);
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        cfg.seed = seed;
        const SolveResult r = solve_randomized_avg(col_spec(), col_ff(), t, cfg);
        rejects += !r.checker.ok;
        for (std::size_t s : r.segment_lengths) bad_segments += s < cfg.ell || s > 2 * cfg.ell;
        mean[idx] += node_averaged_complexity(std::span<const std::uint64_t>(r.termination_round)).to_double() / 10;
      }
      ++idx;
    }
    const double ratio = mean[1] / mean[0];
    const bool ok = rejects == 0 && bad_segments == 0 && ratio <= 1.5;
    pass = pass && ok;
    os << to_string(fam) << ": means " << mean[0] << ' ' << mean[1] << " ratio " << ratio << ", rejects " << rejects
       << ", segments outside [ell,2ell] " << bad_segments << "; ";
  }
  return {pass, os.str()};
}

Outcome criterion_5() {
  constexpr std::size_t ell = 2, length = 1000, executions = 10000;
  std::mt19937_64 rng(5);
  const ElectState fresh = make_elect_state(length, ell);
  double sum = 0, sum_sq = 0;
  std::uint64_t max_rounds = 0;
  std::size_t mismatches = 0;
  for (std::size_t e = 0; e < executions; ++e) {
    const auto coins = draw_coins(length, candidate_probability(ell), rng);
    ElectState st = fresh;
    const ElectExecution ex = apply_execution(st, coins);
    const double rate = static_cast<double>(ex.joined) / static_cast<double>(ex.active);
    sum += rate;
    sum_sq += rate * rate;
    const ElectEngineRun run = run_elect_execution(fresh, coins);
    max_rounds = std::max(max_rounds, run.max_rounds);
    mismatches += run.outcomes != elect_outcomes(fresh, coins);
  }
  const double m = static_cast<double>(executions);
  const double mean = sum / m;
  const double se = std::sqrt(std::max(0.0, sum_sq / m - mean * mean) / (m - 1));
  const double bound = 1.0 / (8.0 * ell) - 3 * se;
  const bool pass = mean >= bound && max_rounds <= execution_rounds(ell) && mismatches == 0;
  std::ostringstream os;
  os << "join rate " << mean << " (se " << se << ", bound " << bound << "), max engine rounds " << max_rounds
     << " (cap " << execution_rounds(ell) << "), engine/direct mismatches " << mismatches;
  return {pass, os.str()};
}

Outcome criterion_6() {
  constexpr std::size_t k = 2;
  SolverConfig cfg;
  std::vector<std::pair<double, double>> avg, base;
  bool checker = true, decline = false, bound = true;
  std::ostringstream os;
  for (std::size_t n : {10000, 100000, 1000000}) {
    const Tree t = make_instance(Family::Hier, n, 1, k);
    const HierResult r = solve_hierarchical_2half(t, k, cfg);
    const HierResult b = solve_hierarchical_baseline(t, k, cfg);
    checker = checker && r.checker.ok && b.checker.ok;
    decline = decline || r.level_k_decline;
    bound = bound && r.participation_bound_ok;
    const double ra = node_averaged_complexity(std::span<const std::uint64_t>(r.termination_round)).to_double();
    const double ba = node_averaged_complexity(std::span<const std::uint64_t>(b.termination_round)).to_double();
    avg.emplace_back(static_cast<double>(t.node_count()), ra);
    base.emplace_back(static_cast<double>(t.node_count()), ba);
    os << "n=" << t.node_count() << " avg " << ra << " baseline " << ba << "; ";
  }
  const SlopeFit fa = estimate_slope(avg), fb = estimate_slope(base);
  const bool ok_a = fa.slope >= 0.25 && fa.slope <= 0.45, ok_b = fb.slope >= 0.40 && fb.slope <= 0.60;
  os << "slope " << fa.slope << " (r2 " << fa.r2 << "), baseline slope " << fb.slope << " (r2 " << fb.r2
     << "), checker " << (checker ? "ok" : "reject") << ", level-2 D " << (decline ? "yes" : "no")
     << ", participation bound " << (bound ? "ok" : "violated");
  return {checker && !decline && ok_a && ok_b, os.str()};
}

Outcome criterion_7() {
  SolverConfig cfg;
  std::size_t rejects = 0, mismatches = 0, solvable = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1 + (seed * 5 + 7 * (seed % 13)) % 500;
    const Tree t = generate_random_tree(n, 4, 700 + seed);
    const BipartiteTree bt = subdivide_edges(t);
    const DiameterResult d = solve_diameter(col_spec(), bt);
    rejects += !d.solvable || !check_solution(col_spec(), bt, d.labels).ok;
    cfg.seed = seed;
    rejects += !solve_deterministic_avg(col_spec(), col_ff(), t, cfg).checker.ok;
  }
  std::mt19937_64 rng(77);
  for (int it = 0; it < 20; ++it) {
    const LclSpec spec = testing::random_spec(rng, 3, 0.55, 0.6);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    const BipartiteTree bt = subdivide_edges(generate_random_tree(n, 3, 900 + it));
    const DiameterResult d = solve_diameter(spec, bt);
    const auto ex = exhaustive_search(spec, bt);
    mismatches += d.solvable != ex.has_value();
    if (d.solvable) {
      ++solvable;
      rejects += !check_solution(spec, bt, d.labels).ok;
    }
  }
  std::ostringstream os;
  os << "200 3-coloring solves, " << rejects << " rejected; 20 synthetic specs (" << solvable
     << " solvable), " << mismatches << " verdict mismatches";
  return {rejects == 0 && mismatches == 0, os.str()};
}

bool star_completable(const LclSpec& spec, const std::vector<Incoming>& ins, Label out) {
  const int labels = static_cast<int>(spec.output_count());
  const std::size_t k = ins.size();
  std::vector<int> near(k, 0), far(k, 0);
  for (;;) {
    bool ok = true;
    Multiset w;
    for (std::size_t i = 0; i < k && ok; ++i) {
      ok = contains(ins[i].set, far[i]) &&
           spec.black().allows(Multiset{{ins[i].input_far, far[i]}, {ins[i].input_near, near[i]}});
      w.push_back({ins[i].input_near, near[i]});
    }
    w.push_back({0, out});
    if (ok && spec.white().allows(w)) return true;
    std::size_t i = 0;
    for (; i < 2 * k; ++i) {
      int& x = i < k ? near[i] : far[i - k];
      if (++x < labels) break;
      x = 0;
    }
    if (i == 2 * k) return false;
  }
}

Outcome criterion_8() {
  std::mt19937_64 rng(88);
  std::size_t g_wrong = 0, labels_checked = 0;
  for (int it = 0; it < 1000; ++it) {
    const LclSpec spec = testing::random_spec(rng, 3, 0.5, 0.5);
    const int k = std::uniform_int_distribution<int>(0, 2)(rng);
    std::vector<Incoming> ins;
    const int inputs = static_cast<int>(spec.input_count());
    for (int i = 0; i < k; ++i)
      ins.push_back({std::uniform_int_distribution<LabelSet>(1, spec.all_outputs())(rng),
                     std::uniform_int_distribution<int>(0, inputs - 1)(rng),
                     std::uniform_int_distribution<int>(0, inputs - 1)(rng)});
    const LabelSet g = maximal_label_set_single_node(spec, ins, 0);
    for (Label l = 0; l < static_cast<Label>(spec.output_count()); ++l, ++labels_checked)
      g_wrong += contains(g, l) != star_completable(spec, ins, l);
  }
  std::size_t rejected = 0;
  for (int it = 0; it < 1000; ++it) {
    const PathInstance p = testing::random_3col_path(rng, 1, 5, 2, 5);
    const PathClass cls = col_ff().independent_class(p);
    rejected += cls.empty() || !verify_independent_class(col_spec(), p, cls);
  }
  std::ostringstream os;
  os << "g(v): " << g_wrong << " of " << labels_checked << " labels disagree with exhaustive search; "
     << "feasible function: " << rejected << " of 1000 classes not independent";
  return {g_wrong == 0 && rejected == 0, os.str()};
}

}  // namespace

int main() {
  Outcome decay;
  report(1, [&] { return criteria_1_and_2(decay); });
  report(2, [&] { return decay; });
  report(3, criterion_3);
  report(4, criterion_4);
  report(5, criterion_5);
  report(6, criterion_6);
  report(7, criterion_7);
  report(8, criterion_8);
  std::printf("%d of 8 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
