#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lclavg/engine.hpp"
#include "lclavg/solvers.hpp"
#include "lclavg/tree.hpp"

namespace lclavg {

enum class Problem { ThreeColoring, TwoHalf };
enum class SolverKind { DetAvg, RandAvg, Baseline, DiamOracle };
enum class Family { Path, Complete, Random, Hier };

std::string to_string(Problem p);
std::string to_string(SolverKind s);
std::string to_string(Family f);
// Throw std::invalid_argument on unknown names.
Problem parse_problem(const std::string& s);
SolverKind parse_solver(const std::string& s);
Family parse_family(const std::string& s);

struct ExperimentPlan {
  Problem problem = Problem::ThreeColoring;
  SolverKind solver = SolverKind::DetAvg;
  Family family = Family::Path;
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds;
  std::string output;
  SolverConfig config;
  std::size_t k = 2;           // 2half parameter and hier family depth
  std::size_t max_degree = 4;  // random family
};

// Throws std::invalid_argument unless sizes strictly increase and there is a seed.
void validate_plan(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const std::string& text);
std::string plan_to_json(const ExperimentPlan& plan);

// Instance of roughly n nodes: complete binary trees and the hier family round to the nearest size they admit.
Tree make_instance(Family family, std::size_t n, std::uint64_t seed, std::size_t k = 2, std::size_t max_degree = 4);

struct ResultRow {
  std::string problem;
  std::string solver;
  std::string family;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Rational avg_rounds;
  std::uint64_t max_rounds = 0;
  bool checker_ok = false;
  std::uint32_t iterations = 0;
  double wall_time_ms = 0;
};

struct RunSummary {
  ResultRow row;
  std::size_t failures = 0;
  std::string message;  // checker or solver error
  std::vector<std::uint64_t> termination_round;
};

// One solve; solver exceptions become a row with checker_ok false.
RunSummary run_single(Problem problem, SolverKind solver, Family family, const Tree& tree, std::uint64_t seed,
                      SolverConfig config, std::size_t k);

// One row per (size, seed), sorted by (n, seed). Concurrency is capped by LCLAVG_THREADS.
std::vector<ResultRow> run_experiment(const ExperimentPlan& plan);

// Six fractional digits, rounded half up.
std::string format_rational(const Rational& r);
// wall_time_ms is written as 0 when timing is off, which makes the output a function of the plan.
std::string rows_to_csv(const std::vector<ResultRow>& rows, bool timing = true);
std::string summary_json(const RunSummary& s);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};
// Least squares of ln y on ln n. Needs three points, all positive.
SlopeFit estimate_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace lclavg
