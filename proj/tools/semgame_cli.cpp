#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "semgame/bench.hpp"
#include "semgame/construction.hpp"
#include "semgame/solver_ql.hpp"
#include "semgame/solver_si.hpp"

using namespace semgame;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty())
      out.push_back(item);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_build(const std::string& ltl, const std::string& inputs, const std::string& outputs,
              const std::string& order, std::size_t max_vertices, const std::string& out) {
  std::string text = std::filesystem::is_regular_file(ltl) ? read_file(ltl) : ltl;
  BuildOptions opts;
  opts.inputs = split_list(inputs);
  opts.outputs = split_list(outputs);
  opts.order = order == "sys" ? MoveOrder::SysFirst : MoveOrder::EnvFirst;
  opts.max_vertices = max_vertices;
  Game g = build_game(parse(text), opts);
  if (out.empty() || out == "-")
    std::cout << game_to_json(g) << '\n';
  else
    store_game(g, out);
  std::cerr << "built " << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
  return 0;
}

struct SolveArgs {
  std::string algo = "si";
  std::uint64_t seed = 0;
  double alpha = 0.1, epsilon = 0.1;
  unsigned check_period = 10;
  std::uint64_t budget = 100000;
  std::string game;
};

int cmd_solve(const SolveArgs& a) {
  Game g = load_game(a.game);
  std::optional<Player> winner;
  Strategy strategy;
  std::uint64_t iterations = 0, steps = 0;
  bool timeout = false;
  if (a.algo == "zielonka") {
    auto sol = zielonka(g);
    winner = sol.winner[g.start()];
    strategy = *winner == Player::System ? sol.system : sol.environment;
  } else if (a.algo == "si" || a.algo == "si-sem") {
    auto [s0, s1] = a.algo == "si" ? init_random(g, a.seed) : init_trueness(g);
    SIResult r = strategy_improvement(g, s0, s1);
    winner = r.winner;
    strategy = r.strategy;
    iterations = r.iterations;
    steps = r.eval_steps;
    timeout = r.timeout;
  } else {
    LearnerConfig cfg;
    cfg.variant = a.algo == "ql-win" ? RewardVariant::Win : a.algo == "ql-pri" ? RewardVariant::Pri : RewardVariant::Sem;
    cfg.alpha = a.alpha;
    cfg.epsilon = a.epsilon;
    cfg.check_period = a.check_period;
    cfg.budget = a.budget;
    cfg.seed = a.seed;
    QLResult r = learn(g, cfg);
    winner = r.winner;
    strategy = r.strategy;
    iterations = r.episodes;
    steps = r.eval_steps;
    timeout = r.timeout;
  }
  double size = winner ? solution_size(g, strategy) : 0.0;
  std::string w = winner ? to_string(*winner) : "none";
  std::cout << "winner: " << w << '\n'
            << (a.algo.rfind("ql", 0) == 0 ? "episodes: " : "iterations: ") << iterations << '\n'
            << "eval steps: " << steps << '\n'
            << "solution size: " << size << '\n';
  if (timeout)
    std::cout << "budget exhausted\n";
  std::cout << "RESULT winner=" << w << " iterations=" << iterations << " eval_steps=" << steps
            << " solution_size=" << size << " timeout=" << (timeout ? 1 : 0) << '\n';
  return 0;
}

struct BenchArgs {
  std::string cls = "safety";
  unsigned count = 100, runs = 5, size = 12, aps = 4, threads = 0;
  double timeout = 60;
  std::uint64_t seed = 0;
  std::size_t max_vertices = 10000;
  std::string algos = "si,si-sem,ql-win,ql-pri,ql-sem";
  std::string out;
  bool timing = false;
};

int cmd_bench(const BenchArgs& a) {
  FormulaClassSpec spec = builtin_class(a.cls);
  spec.size = a.size;
  spec.aps = a.aps;
  ModelSet set = generate_models(spec, a.count, a.seed, a.max_vertices);
  std::vector<Algo> algos;
  for (const auto& name : split_list(a.algos))
    algos.push_back(parse_algo(name));
  SuiteOptions opts;
  opts.runs = a.runs;
  opts.timeout_seconds = a.timeout;
  opts.seed = a.seed;
  opts.threads = a.threads;
  opts.timing = a.timing;
  auto records = run_suite(set.models, algos, opts);
  std::string csv = to_csv(records);
  if (a.out.empty() || a.out == "-") {
    std::cout << csv;
  } else {
    std::ofstream(a.out) << csv;
    std::ofstream filtered(a.out + ".filtered");
    for (const auto& f : set.filtered)
      filtered << f.id << '\t' << f.formula << '\t' << f.reason << '\n';
  }
  std::cerr << set.models.size() << " models, " << set.filtered.size() << " filtered, " << records.size()
            << " records\n";
  return 0;
}

int cmd_report(const std::string& path, const std::string& prefix) {
  auto records = parse_csv(read_file(path));
  std::cout << format_report(aggregate(records));
  auto files = write_step_distributions(records, prefix.empty() ? path : prefix);
  std::cout << "\nstep distributions: " << files.size() << " files\n";
  for (const auto& f : files)
    std::cout << "  " << f << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity games from LTL, solved with semantic guidance"};
  app.require_subcommand(1);

  std::string ltl, inputs, outputs, order = "env", out;
  std::size_t max_vertices = 10000;
  auto* build = app.add_subcommand("build", "Construct a labelled parity game from an LTL formula");
  build->add_option("--ltl", ltl, "Formula or file containing it")->required();
  build->add_option("--inputs", inputs, "Comma-separated environment propositions");
  build->add_option("--outputs", outputs, "Comma-separated system propositions");
  build->add_option("--order", order, "Who moves first")->check(CLI::IsMember({"env", "sys"}));
  build->add_option("--max-vertices", max_vertices, "Vertex budget");
  build->add_option("-o,--output", out, "Output game file");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve a game file");
  solve->add_option("--algo", sa.algo)->check(CLI::IsMember({"si", "si-sem", "ql-win", "ql-pri", "ql-sem", "zielonka"}));
  solve->add_option("--seed", sa.seed);
  solve->add_option("--alpha", sa.alpha);
  solve->add_option("--epsilon", sa.epsilon);
  solve->add_option("--check-period", sa.check_period);
  solve->add_option("--budget", sa.budget);
  solve->add_option("game", sa.game)->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run the random-formula benchmark");
  bench->add_option("--class", ba.cls)->check(CLI::IsMember(builtin_class_names()));
  bench->add_option("--count", ba.count);
  bench->add_option("--runs", ba.runs);
  bench->add_option("--timeout", ba.timeout, "Seconds per record");
  bench->add_option("--seed", ba.seed);
  bench->add_option("--size", ba.size, "Formula tree size");
  bench->add_option("--aps", ba.aps, "Number of propositions");
  bench->add_option("--algos", ba.algos);
  bench->add_option("--threads", ba.threads);
  bench->add_option("--max-vertices", ba.max_vertices);
  bench->add_flag("--timing", ba.timing, "Record wall-clock milliseconds");
  bench->add_option("-o,--output", ba.out);

  std::string report_in, prefix;
  auto* report = app.add_subcommand("report", "Summarize a benchmark CSV");
  report->add_option("csv", report_in)->required();
  report->add_option("--prefix", prefix, "Prefix for step distribution files");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*build)
      return cmd_build(ltl, inputs, outputs, order, max_vertices, out);
    if (*solve)
      return cmd_solve(sa);
    if (*bench)
      return cmd_bench(ba);
    if (*report)
      return cmd_report(report_in, prefix);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
