#include "semgame/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "semgame/construction.hpp"
#include "semgame/solver_si.hpp"

namespace semgame {

FormulaClassSpec builtin_class(const std::string& name) {
  FormulaClassSpec s;
  s.name = name;
  if (name == "safety")
    s.weights = {7, 7, 10, 0, 5, 0};
  else if (name == "cosafety")
    s.weights = {7, 7, 0, 10, 5, 0};
  else if (name == "near-safety")
    s.weights = {7, 7, 10, 1, 5, 1};
  else if (name == "near-cosafety")
    s.weights = {7, 7, 1, 10, 5, 1};
  else if (name == "parity")
    s.weights = {1, 1, 1, 1, 1, 1};
  else
    throw std::invalid_argument("unknown formula class '" + name + "'");
  return s;
}

std::vector<std::string> builtin_class_names() {
  return {"safety", "cosafety", "near-safety", "near-cosafety", "parity"};
}

std::vector<std::string> ap_names(unsigned count) {
  if (count > 26)
    throw std::invalid_argument("at most 26 propositions");
  std::vector<std::string> out;
  for (unsigned i = 0; i < count; ++i)
    out.emplace_back(1, static_cast<char>('a' + i));
  return out;
}

namespace {

enum Slot { And, Or, Glob, Fin, Next, Until };

class Generator {
 public:
  Generator(const FormulaClassSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed), aps_(ap_names(spec.aps)) {}

  Formula tree(unsigned size) {
    std::vector<int> slots;
    std::vector<double> w;
    for (int s = And; s <= Until; ++s) {
      bool binary = s == And || s == Or || s == Until;
      if (spec_.weights[s] > 0 && size >= (binary ? 3u : 2u)) {
        slots.push_back(s);
        w.push_back(spec_.weights[s]);
      }
    }
    if (size <= 1 || slots.empty())
      return leaf();
    int s = slots[std::discrete_distribution<int>(w.begin(), w.end())(rng_)];
    if (s == Glob || s == Fin || s == Next) {
      Formula c = tree(size - 1);
      return s == Glob ? make_globally(c) : s == Fin ? make_finally(c) : make_next(c);
    }
    unsigned left = std::uniform_int_distribution<unsigned>(1, size - 2)(rng_);
    Formula a = tree(left);
    Formula b = tree(size - 1 - left);
    return s == And ? make_and(a, b) : s == Or ? make_or(a, b) : make_until(a, b);
  }

 private:
  Formula leaf() {
    Formula a = Formula::atom(aps_[std::uniform_int_distribution<std::size_t>(0, aps_.size() - 1)(rng_)]);
    return std::bernoulli_distribution(0.5)(rng_) ? a : make_not(a);
  }

  const FormulaClassSpec& spec_;
  std::mt19937_64 rng_;
  std::vector<std::string> aps_;
};

}  // namespace

Formula random_formula(const FormulaClassSpec& spec, std::uint64_t seed) {
  if (std::none_of(spec.weights.begin(), spec.weights.end(), [](double w) { return w > 0; }))
    throw std::invalid_argument("all operator weights are zero");
  if (std::any_of(spec.weights.begin(), spec.weights.end(), [](double w) { return w < 0; }))
    throw std::invalid_argument("operator weights must be non-negative");
  if (spec.aps == 0)
    throw std::invalid_argument("need at least one proposition");
  return Generator(spec, seed).tree(std::max(1u, spec.size));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over master + index
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ModelSet generate_models(const FormulaClassSpec& spec, unsigned count, std::uint64_t seed, std::size_t max_vertices) {
  ModelSet set;
  const auto aps = ap_names(spec.aps);
  BuildOptions opts;
  for (std::size_t i = 0; i < aps.size(); ++i)
    (i % 2 == 0 ? opts.inputs : opts.outputs).push_back(aps[i]);
  opts.max_vertices = max_vertices;
  std::uint64_t class_salt = 0;
  for (char c : spec.name)
    class_salt = derive_seed(class_salt, static_cast<unsigned char>(c)) & 0xffffffffULL;
  for (unsigned i = 0; i < count; ++i) {
    std::string id = spec.name + "-" + std::to_string(i);
    Formula f = random_formula(spec, derive_seed(seed ^ (class_salt << 32), i));
    try {
      set.models.push_back({id, spec.name, f, build_game(f, opts)});
    } catch (const BuildError& e) {
      set.filtered.push_back({id, to_string(f), e.what()});
    }
  }
  return set;
}

const char* to_string(Algo a) {
  switch (a) {
    case Algo::SI: return "si";
    case Algo::SISem: return "si-sem";
    case Algo::QLWin: return "ql-win";
    case Algo::QLPri: return "ql-pri";
    case Algo::QLSem: return "ql-sem";
  }
  return "?";
}

Algo parse_algo(const std::string& name) {
  for (Algo a : all_algos())
    if (name == to_string(a))
      return a;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::vector<Algo> all_algos() { return {Algo::SI, Algo::SISem, Algo::QLWin, Algo::QLPri, Algo::QLSem}; }

BenchRecord run_cell(const Model& model, Algo algo, unsigned run, std::uint64_t seed, const SuiteOptions& options) {
  BenchRecord r;
  r.model = model.id;
  r.cls = model.cls;
  r.algo = to_string(algo);
  r.run = run;
  r.seed = seed;
  r.timeout = "0";
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(options.timeout_seconds));
  std::optional<Player> winner;
  Strategy strategy;
  if (algo == Algo::SI || algo == Algo::SISem) {
    auto [s0, s1] = algo == Algo::SI ? init_random(model.game, seed) : init_trueness(model.game);
    SIOptions so;
    so.deadline = deadline;
    SIResult res = strategy_improvement(model.game, s0, s1, so);
    winner = res.winner;
    strategy = res.strategy;
    r.eval_steps = res.eval_steps;
    r.immediate = res.immediate;
    if (res.timeout)
      r.timeout = "wall";
  } else {
    LearnerConfig cfg = options.ql;
    cfg.variant = algo == Algo::QLWin ? RewardVariant::Win : algo == Algo::QLPri ? RewardVariant::Pri : RewardVariant::Sem;
    cfg.seed = seed;
    cfg.deadline = deadline;
    QLResult res = learn(model.game, cfg);
    winner = res.winner;
    strategy = res.strategy;
    r.eval_steps = res.eval_steps;
    r.immediate = res.immediate;
    if (res.timeout)
      r.timeout = res.eval_steps >= cfg.budget ? "steps" : "wall";
  }
  if (winner) {
    r.winner = to_string(*winner);
    r.solution_size = solution_size(model.game, strategy);
  }
  if (options.timing)
    r.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
  return r;
}

std::vector<BenchRecord> run_suite(const std::vector<Model>& models, const std::vector<Algo>& algos,
                                   const SuiteOptions& options) {
  const std::size_t total = models.size() * algos.size() * options.runs;
  std::vector<BenchRecord> records(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t cell; (cell = next++) < total;) {
      std::size_t run = cell % options.runs;
      std::size_t a = (cell / options.runs) % algos.size();
      std::size_t m = cell / (options.runs * algos.size());
      // shared by every algorithm on the same (model, run): paired comparison
      std::uint64_t seed = derive_seed(options.seed, m * options.runs + run);
      try {
        records[cell] = run_cell(models[m], algos[a], static_cast<unsigned>(run), seed, options);
      } catch (const std::exception&) {
        BenchRecord r;
        r.model = models[m].id;
        r.cls = models[m].cls;
        r.algo = to_string(algos[a]);
        r.run = static_cast<unsigned>(run);
        r.seed = seed;
        r.timeout = "error";
        records[cell] = r;
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
  return records;
}

std::string csv_header() { return "model,class,algo,run,seed,winner,eval_steps,solution_size,immediate,wall_ms,timeout"; }

std::string to_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream os;
  os << csv_header() << '\n';
  char size[32];
  for (const auto& r : records) {
    std::snprintf(size, sizeof size, "%.6f", r.solution_size);
    os << r.model << ',' << r.cls << ',' << r.algo << ',' << r.run << ',' << r.seed << ',' << r.winner << ','
       << r.eval_steps << ',' << size << ',' << (r.immediate ? 1 : 0) << ',' << r.wall_ms << ',' << r.timeout
       << '\n';
  }
  return os.str();
}

std::vector<BenchRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != csv_header())
    throw std::invalid_argument("unexpected CSV header");
  std::vector<BenchRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');)
      f.push_back(cell);
    if (!line.empty() && line.back() == ',')
      f.emplace_back();
    if (f.size() != 11)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 11 fields");
    try {
      BenchRecord r;
      r.model = f[0];
      r.cls = f[1];
      r.algo = f[2];
      r.run = static_cast<unsigned>(std::stoul(f[3]));
      r.seed = std::stoull(f[4]);
      r.winner = f[5];
      r.eval_steps = std::stoull(f[6]);
      r.solution_size = std::stod(f[7]);
      r.immediate = f[8] == "1";
      r.wall_ms = std::stoull(f[9]);
      r.timeout = f[10];
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": malformed field");
    }
  }
  return out;
}

double geometric_mean(const std::vector<double>& xs) {
  if (xs.empty())
    throw std::invalid_argument("geometric mean of an empty sample");
  double acc = 0;
  for (double x : xs)
    acc += std::log(x);
  return std::exp(acc / static_cast<double>(xs.size()));
}

std::vector<CellSummary> aggregate(const std::vector<BenchRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::vector<const BenchRecord*>> cells;
  for (const auto& r : records)
    cells[{r.cls, r.algo}].push_back(&r);
  std::vector<CellSummary> out;
  for (const auto& [key, rs] : cells) {
    CellSummary s;
    s.cls = key.first;
    s.algo = key.second;
    s.records = rs.size();
    std::vector<double> steps, sizes;
    std::size_t immediate = 0;
    for (const auto* r : rs) {
      if (r->timed_out()) {
        ++s.timeouts;
        continue;
      }
      steps.push_back(std::max<double>(1.0, static_cast<double>(r->eval_steps)));
      sizes.push_back(r->solution_size);
      immediate += r->immediate ? 1 : 0;
    }
    if (!steps.empty()) {
      s.mean_steps = geometric_mean(steps);
      double sum = 0;
      for (double x : sizes)
        sum += x;
      s.mean_solution_size = sum / static_cast<double>(sizes.size());
      if (s.algo == "si" || s.algo == "si-sem")
        s.immediate_percent = 100.0 * static_cast<double>(immediate) / static_cast<double>(steps.size());
    }
    s.timeout_percent = 100.0 * static_cast<double>(s.timeouts) / static_cast<double>(s.records);
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_report(const std::vector<CellSummary>& summary) {
  auto num = [](const std::optional<double>& v, const char* fmt) {
    if (!v)
      return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, fmt, *v);
    return std::string(buf);
  };
  std::ostringstream os;
  char line[160];
  os << "Immediately solved by the initial strategy (%)\n";
  std::snprintf(line, sizeof line, "%-16s %10s %10s\n", "class", "si", "si-sem");
  os << line;
  std::map<std::string, std::map<std::string, const CellSummary*>> by_class;
  for (const auto& s : summary)
    by_class[s.cls][s.algo] = &s;
  for (const auto& [cls, algos] : by_class) {
    auto get = [&](const char* a) {
      auto it = algos.find(a);
      return it == algos.end() ? std::optional<double>() : it->second->immediate_percent;
    };
    std::snprintf(line, sizeof line, "%-16s %10s %10s\n", cls.c_str(), num(get("si"), "%.1f").c_str(),
                  num(get("si-sem"), "%.1f").c_str());
    os << line;
  }
  os << "\nGeometric mean of evaluation steps / mean solution size / timeouts (%)\n";
  std::snprintf(line, sizeof line, "%-16s %-8s %14s %10s %9s %8s\n", "class", "algo", "steps", "size", "timeout",
                "records");
  os << line;
  for (const auto& s : summary) {
    std::snprintf(line, sizeof line, "%-16s %-8s %14s %10s %9.1f %8zu\n", s.cls.c_str(), s.algo.c_str(),
                  num(s.mean_steps, "%.1f").c_str(), num(s.mean_solution_size, "%.3f").c_str(), s.timeout_percent,
                  s.records);
    os << line;
  }
  return os.str();
}

std::vector<std::string> write_step_distributions(const std::vector<BenchRecord>& records, const std::string& prefix) {
  std::map<std::pair<std::string, std::string>, std::vector<std::uint64_t>> cells;
  for (const auto& r : records)
    if (!r.timed_out())
      cells[{r.cls, r.algo}].push_back(r.eval_steps);
  std::vector<std::string> paths;
  for (auto& [key, steps] : cells) {
    std::sort(steps.begin(), steps.end());
    std::string path = prefix + "." + key.first + "." + key.second + ".dat";
    std::ofstream out(path);
    if (!out)
      throw std::runtime_error("cannot write " + path);
    out << "# rank eval_steps\n";
    for (std::size_t i = 0; i < steps.size(); ++i)
      out << i + 1 << ' ' << steps[i] << '\n';
    paths.push_back(path);
  }
  return paths;
}

}  // namespace semgame
