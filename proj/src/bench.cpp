#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "lclavg/bench.hpp"

namespace lclavg {

std::string to_string(Problem p) { return p == Problem::ThreeColoring ? "3col" : "2half"; }

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::DetAvg:
      return "det-avg";
    case SolverKind::RandAvg:
      return "rand-avg";
    case SolverKind::Baseline:
      return "baseline";
    default:
      return "diam-oracle";
  }
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Path:
      return "path";
    case Family::Complete:
      return "complete";
    case Family::Random:
      return "random";
    default:
      return "hier";
  }
}

Problem parse_problem(const std::string& s) {
  if (s == "3col") return Problem::ThreeColoring;
  if (s == "2half") return Problem::TwoHalf;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

SolverKind parse_solver(const std::string& s) {
  for (auto k : {SolverKind::DetAvg, SolverKind::RandAvg, SolverKind::Baseline, SolverKind::DiamOracle})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown solver '" + s + "'");
}

Family parse_family(const std::string& s) {
  for (auto f : {Family::Path, Family::Complete, Family::Random, Family::Hier})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown family '" + s + "'");
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.sizes.empty()) throw std::invalid_argument("plan has no sizes");
  for (std::size_t i = 1; i < plan.sizes.size(); ++i)
    if (plan.sizes[i] <= plan.sizes[i - 1]) throw std::invalid_argument("size ladder must strictly increase");
  if (plan.seeds.empty()) throw std::invalid_argument("plan needs at least one seed");
  if (plan.problem == Problem::TwoHalf && plan.solver != SolverKind::DetAvg && plan.solver != SolverKind::Baseline)
    throw std::invalid_argument("2half supports det-avg and baseline only");
}

ExperimentPlan plan_from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("plan is not valid JSON: ") + e.what());
  }
  ExperimentPlan p;
  try {
    p.problem = parse_problem(j.value("problem", "3col"));
    p.solver = parse_solver(j.value("solver", "det-avg"));
    p.family = parse_family(j.value("family", "path"));
    p.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    p.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    p.output = j.value("output", "");
    p.k = j.value("k", p.k);
    p.max_degree = j.value("max_degree", p.max_degree);
    p.config.ell = j.value("ell", p.config.ell);
    p.config.c_fail = j.value("c_fail", p.config.c_fail);
    p.config.c_phase = j.value("c_phase", p.config.c_phase);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad plan field: ") + e.what());
  }
  validate_plan(p);
  return p;
}

std::string plan_to_json(const ExperimentPlan& p) {
  nlohmann::ordered_json j;
  j["problem"] = to_string(p.problem);
  j["solver"] = to_string(p.solver);
  j["family"] = to_string(p.family);
  j["sizes"] = p.sizes;
  j["seeds"] = p.seeds;
  j["output"] = p.output;
  j["k"] = p.k;
  j["max_degree"] = p.max_degree;
  j["ell"] = p.config.ell;
  j["c_fail"] = p.config.c_fail;
  j["c_phase"] = p.config.c_phase;
  return j.dump(2);
}

Tree make_instance(Family family, std::size_t n, std::uint64_t seed, std::size_t k, std::size_t max_degree) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  switch (family) {
    case Family::Path:
      return generate_path(n);
    case Family::Complete: {
      std::size_t depth = 0;
      while ((std::size_t{2} << (depth + 1)) - 1 <= n) ++depth;
      return generate_complete_tree(2, depth);
    }
    case Family::Random:
      return generate_random_tree(n, max_degree, seed);
    default: {
      std::size_t best = 1;
      for (std::size_t s = 1;; ++s) {
        const std::size_t c = hierarchical_node_count(k, s);
        const auto gap = [&](std::size_t x) { return x > n ? x - n : n - x; };
        if (gap(c) < gap(hierarchical_node_count(k, best))) best = s;
        if (c >= n) break;
      }
      return generate_hierarchical_worst_case(k, best);
    }
  }
}

RunSummary run_single(Problem problem, SolverKind solver, Family family, const Tree& tree, std::uint64_t seed,
                      SolverConfig config, std::size_t k) {
  RunSummary s;
  s.row.problem = to_string(problem);
  s.row.solver = to_string(solver);
  s.row.family = to_string(family);
  s.row.n = tree.node_count();
  s.row.seed = seed;
  config.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (problem == Problem::ThreeColoring) {
      static const LclSpec spec = three_coloring_spec(4);
      static const ThreeColoringFeasible ff(spec);
      if (tree.max_degree() > 4) throw std::invalid_argument("3col instances need max degree 4");
      SolveResult r;
      switch (solver) {
        case SolverKind::DetAvg:
          r = solve_deterministic_avg(spec, ff, tree, config);
          break;
        case SolverKind::RandAvg:
          r = solve_randomized_avg(spec, ff, tree, config);
          break;
        case SolverKind::Baseline:
          r = solve_worst_case_baseline(spec, ff, tree, config);
          break;
        default:
          r = solve_diameter_oracle(spec, tree);
      }
      s.termination_round = std::move(r.termination_round);
      s.row.max_rounds = r.max_rounds;
      s.row.checker_ok = r.checker.ok;
      s.row.iterations = r.iterations;
      s.failures = r.failures;
      s.message = r.checker.message;
    } else {
      HierResult r;
      if (solver == SolverKind::DetAvg)
        r = solve_hierarchical_2half(tree, k, config);
      else if (solver == SolverKind::Baseline)
        r = solve_hierarchical_baseline(tree, k, config);
      else
        throw std::invalid_argument("2half supports det-avg and baseline only");
      s.termination_round = std::move(r.termination_round);
      s.row.max_rounds = r.max_rounds;
      s.row.checker_ok = r.checker.ok;
      s.row.iterations = static_cast<std::uint32_t>(k);
      s.failures = r.level_k_decline ? 1 : 0;
      s.message = r.checker.message;
    }
    s.row.avg_rounds = node_averaged_complexity(std::span<const std::uint64_t>(s.termination_round));
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    s.row.checker_ok = false;
    s.message = e.what();
  }
  s.row.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

std::vector<ResultRow> run_experiment(const ExperimentPlan& plan) {
  validate_plan(plan);
  std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
  for (std::size_t n : plan.sizes)
    for (std::uint64_t seed : plan.seeds) jobs.emplace_back(n, seed);
  std::vector<ResultRow> rows(jobs.size());
  std::size_t threads = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LCLAVG_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) threads = std::min<std::size_t>(threads, static_cast<std::size_t>(cap));
  }
  threads = std::min(threads, jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        const Tree t = make_instance(plan.family, jobs[i].first, jobs[i].second, plan.k, plan.max_degree);
        rows[i] = run_single(plan.problem, plan.solver, plan.family, t, jobs[i].second, plan.config, plan.k).row;
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return std::tie(a.n, a.seed) < std::tie(b.n, b.seed); });
  return rows;
}

std::string format_rational(const Rational& r) {
  if (r.den <= 0) throw std::invalid_argument("bad rational");
  const bool neg = r.num < 0;
  const __int128 num = neg ? -static_cast<__int128>(r.num) : r.num;
  const __int128 scaled = (num * 2000000 + r.den) / (2 * static_cast<__int128>(r.den));
  const auto whole = static_cast<std::uint64_t>(scaled / 1000000);
  const auto frac = static_cast<std::uint64_t>(scaled % 1000000);
  std::string f = std::to_string(frac);
  return (neg && scaled != 0 ? "-" : "") + std::to_string(whole) + "." + std::string(6 - f.size(), '0') + f;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows, bool timing) {
  std::ostringstream os;
  os << "problem,solver,family,n,seed,avg_rounds,max_rounds,checker_ok,iterations,wall_time_ms\n";
  for (const auto& r : rows) {
    os << r.problem << ',' << r.solver << ',' << r.family << ',' << r.n << ',' << r.seed << ','
       << format_rational(r.avg_rounds) << ',' << r.max_rounds << ',' << (r.checker_ok ? "true" : "false") << ','
       << r.iterations << ',';
    if (timing) {
      os.setf(std::ios::fixed);
      os.precision(3);
      os << r.wall_time_ms;
    } else {
      os << 0;
    }
    os << '\n';
  }
  return os.str();
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["problem"] = s.row.problem;
  j["n"] = s.row.n;
  j["seed"] = s.row.seed;
  j["avg_rounds"] = std::stod(format_rational(s.row.avg_rounds));
  j["max_rounds"] = s.row.max_rounds;
  j["checker"] = s.row.checker_ok ? "accept" : "reject";
  j["iterations"] = s.row.iterations;
  j["failures"] = s.failures;
  return j.dump();
}

SlopeFit estimate_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least three points");
  double sx = 0, sy = 0;
  std::vector<std::pair<double, double>> lg;
  for (const auto& [n, y] : points) {
    if (!(n > 0) || !(y > 0)) throw std::invalid_argument("slope fit needs positive values");
    lg.emplace_back(std::log(n), std::log(y));
    sx += lg.back().first;
    sy += lg.back().second;
  }
  const double m = static_cast<double>(lg.size());
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : lg) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) throw std::invalid_argument("slope fit needs distinct sizes");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace lclavg
