#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lclavg/bench.hpp"
#include "lclavg/decomp.hpp"
#include "lclavg/solvers.hpp"

using namespace lclavg;

namespace {

constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct InstanceArgs {
  std::string family = "path";
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::size_t k = 2;
  std::size_t max_degree = 4;
  std::string tree_file;

  void add(CLI::App* app) {
    app->add_option("--family", family, "path, complete, random or hier")
        ->check(CLI::IsMember({"path", "complete", "random", "hier"}));
    app->add_option("--n", n, "approximate node count");
    app->add_option("--seed", seed, "instance and solver seed");
    app->add_option("--k", k, "levels of the 2half problem and the hier family");
    app->add_option("--max-degree", max_degree, "degree bound of the random family");
    app->add_option("--tree", tree_file, "read the tree from a file instead of generating one");
  }
  Tree build() const {
    if (!tree_file.empty()) return read_tree(read_file(tree_file));
    return make_instance(parse_family(family), n, seed, k, max_degree);
  }
};

std::string labels_text(const SolveResult& r) {
  std::string out;
  for (const auto& [a, b] : r.labels) out += std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

std::string labels_text(const HierResult& r) {
  std::string out;
  for (HierLabel l : r.labels) out += to_char(l);
  return out + "\n";
}

HierLabel parse_hier_label(char c) {
  switch (c) {
    case 'W':
      return HierLabel::W;
    case 'B':
      return HierLabel::B;
    case 'E':
      return HierLabel::E;
    case 'D':
      return HierLabel::D;
    default:
      throw std::invalid_argument(std::string("bad label '") + c + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Node-averaged LCL solvers on trees"};
  app.require_subcommand(1);

  InstanceArgs gen_args;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a tree");
  gen_args.add(gen);
  gen->add_option("--out", gen_out, "output file, stdout by default");

  InstanceArgs run_args;
  std::string problem = "3col", solver = "det-avg", run_out, labels_out;
  SolverConfig config;
  bool dump = false;
  auto* run = app.add_subcommand("run", "solve one instance and print a JSON summary");
  run_args.add(run);
  run->add_option("--problem", problem, "3col or 2half")->check(CLI::IsMember({"3col", "2half"}));
  run->add_option("--solver", solver, "det-avg, rand-avg, baseline or diam-oracle")
      ->check(CLI::IsMember({"det-avg", "rand-avg", "baseline", "diam-oracle"}));
  run->add_option("--ell", config.ell, "compress path parameter")->check(CLI::PositiveNumber);
  run->add_option("--c-phase", config.c_phase, "2half phase constant")->check(CLI::PositiveNumber);
  run->add_option("--c-fail", config.c_fail, "randomized execution budget constant")->check(CLI::PositiveNumber);
  run->add_option("--out", run_out, "summary file, stdout by default");
  run->add_option("--labels-out", labels_out, "write the labeling to a file");
  run->add_flag("--dump", dump, "add the termination round of every node to the summary");

  std::string check_problem = "3col", check_tree, check_labels;
  std::size_t check_k = 2;
  auto* check = app.add_subcommand("check", "check a labeling");
  check->add_option("--problem", check_problem, "3col or 2half")->check(CLI::IsMember({"3col", "2half"}));
  check->add_option("--tree", check_tree, "tree file")->required();
  check->add_option("--labels", check_labels, "labels file")->required();
  check->add_option("--k", check_k, "levels of the 2half problem");

  InstanceArgs dec_args;
  std::size_t dec_ell = 2;
  std::string dec_mode = "det", dec_out;
  bool dec_layers = false;
  auto* dec = app.add_subcommand("decompose", "print the decomposition trace");
  dec_args.add(dec);
  dec->add_option("--ell", dec_ell, "compress path parameter")->check(CLI::PositiveNumber);
  dec->add_option("--mode", dec_mode, "det or rand")->check(CLI::IsMember({"det", "rand"}));
  dec->add_flag("--layers", dec_layers, "print the layer of every node after the trace");
  dec->add_option("--out", dec_out, "output file, stdout by default");

  std::string plan_file, bench_out;
  bool no_timing = false;
  auto* bench = app.add_subcommand("bench", "run an experiment plan and write CSV");
  bench->add_option("--plan", plan_file, "JSON plan")->required();
  bench->add_option("--out", bench_out, "CSV file; overrides the plan output");
  bench->add_flag("--no-timing", no_timing, "write 0 for wall time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) {
      write_output(gen_out, write_tree(gen_args.build()));
      return 0;
    }
    if (*run) {
      const Tree t = run_args.build();
      const Family fam = parse_family(run_args.family);
      const RunSummary s =
          run_single(parse_problem(problem), parse_solver(solver), fam, t, run_args.seed, config, run_args.k);
      std::string text = summary_json(s);
      if (dump) {
        auto j = nlohmann::ordered_json::parse(text);
        j["termination_round"] = s.termination_round;
        if (!s.message.empty()) j["message"] = s.message;
        text = j.dump();
      }
      write_output(run_out, text + "\n");
      if (!labels_out.empty()) {
        // The summary does not keep labels; solve again with the same seed.
        config.seed = run_args.seed;
        if (problem == "2half") {
          const HierResult r = solver == "baseline" ? solve_hierarchical_baseline(t, run_args.k, config)
                                                    : solve_hierarchical_2half(t, run_args.k, config);
          write_output(labels_out, labels_text(r));
        } else {
          const LclSpec spec = three_coloring_spec(4);
          const ThreeColoringFeasible ff(spec);
          SolveResult r;
          if (solver == "det-avg")
            r = solve_deterministic_avg(spec, ff, t, config);
          else if (solver == "rand-avg")
            r = solve_randomized_avg(spec, ff, t, config);
          else if (solver == "baseline")
            r = solve_worst_case_baseline(spec, ff, t, config);
          else
            r = solve_diameter_oracle(spec, t);
          write_output(labels_out, labels_text(r));
        }
      }
      if (!s.row.checker_ok) std::cerr << "checker: " << s.message << "\n";
      return s.row.checker_ok ? 0 : 1;
    }
    if (*check) {
      const Tree t = read_tree(read_file(check_tree));
      const std::string text = read_file(check_labels);
      Verdict v;
      if (check_problem == "2half") {
        std::vector<HierLabel> labels;
        for (char c : text)
          if (!std::isspace(static_cast<unsigned char>(c))) labels.push_back(parse_hier_label(c));
        v = check_hierarchical_2half(t, check_k, labels);
      } else {
        std::istringstream in(text);
        std::vector<std::array<Label, 2>> labels;
        Label a, b;
        while (in >> a >> b) labels.push_back({a, b});
        if (labels.size() != t.edge_count()) throw std::invalid_argument("expected one label pair per edge");
        const LclSpec spec = three_coloring_spec(4);
        const BipartiteTree bt = subdivide_edges(t);
        v = check_solution(spec, bt, to_bipartite_labels(t, bt, labels));
      }
      std::cout << (v.ok ? "accept" : "reject: " + v.message) << "\n";
      return v.ok ? 0 : 1;
    }
    if (*dec) {
      const Tree t = dec_args.build();
      const IdAssignment ids = assign_ids(t.node_count(), dec_args.seed);
      DecompositionParams p;
      p.ell = dec_ell;
      std::mt19937_64 rng(dec_args.seed);
      if (dec_mode == "rand") {
        p.mode = DecompositionMode::Randomized;
        p.elector = [&](std::span<const NodeId> middle, std::uint32_t) {
          return randomized_compress(middle.size(), dec_ell, 2, t.node_count(), rng).z;
        };
      }
      const Decomposition d = compute_decomposition(t, ids, p);
      std::string text = trace_csv(d.trace);
      if (dec_layers) text += state_dump(d.state);
      write_output(dec_out, text);
      return 0;
    }
    if (*bench) {
      const ExperimentPlan plan = plan_from_json(read_file(plan_file));
      const auto rows = run_experiment(plan);
      write_output(bench_out.empty() ? plan.output : bench_out, rows_to_csv(rows, !no_timing));
      for (const auto& r : rows)
        if (!r.checker_ok) return 1;
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
