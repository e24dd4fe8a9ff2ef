// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures, not counting criteria named with --known-failure N (their line
// still reads FAIL). The semgame CLI path comes in as SEMGAME_CLI.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "semgame/bench.hpp"
#include "semgame/construction.hpp"
#include "semgame/solver_ql.hpp"
#include "semgame/solver_si.hpp"
#include "semgame/trueness.hpp"

using namespace semgame;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;
std::set<int> known_failures;

void criterion(int n, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs < limit_seconds;
  bool pass = o.ok && in_time;
  bool known = known_failures.count(n) > 0;
  failures += !pass && !known;
  std::printf("%s [%d] %s: %s (%.2fs, limit %.0fs%s)%s\n", pass ? "PASS" : "FAIL", n, name.c_str(), o.detail.c_str(),
              secs, limit_seconds, in_time ? "" : ", over time",
              known ? (pass ? " [listed as a known failure but passed]" : " [known failure]") : "");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome fixture_fidelity() {
  Game g = fixture::sample();
  bool z = zielonka(g).winner[0] == Player::System;
  bool cw = check_winning(g, fixture::sample_sigma0(g), Player::System);
  int si_ok = 0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    auto [s, e] = init_random(g, static_cast<std::uint64_t>(seed));
    SIResult r = strategy_improvement(g, s, e);
    si_ok += r.winner == Player::System && check_winning(g, r.strategy, Player::System);
  }
  return {z && cw && si_ok == seeds,
          "zielonka " + std::string(z ? "system" : "environment") + ", sigma0 winning " + (cw ? "yes" : "no") +
              ", SI system wins " + std::to_string(si_ok) + "/" + std::to_string(seeds) + " seeds"};
}

Outcome trueness_ground_truth() {
  bool quarter = trueness(parse("G a & G !a")) == TruenessValue(1, 2);

  std::mt19937_64 rng(2024);
  const std::vector<std::string> aps{"a", "b", "c", "d", "e", "f"};
  int halves = 0, tried = 0;
  while (tried < 20) {
    Formula psi = oracle::random_ltl(rng, aps, 2 + tried % 9);
    Formula f = make_finally(psi);
    if (f.is_constant())
      continue;
    ++tried;
    halves += trueness(f) == TruenessValue(1, 1);
  }

  int agree = 0, checked = 0;
  while (checked < 1000) {
    Formula f = oracle::random_ltl(rng, aps, 1 + rng() % 24);
    auto [sat, total] = oracle::brute_trueness(f);
    if (total > (1u << 12))
      continue;
    ++checked;
    agree += trueness(f) == TruenessValue(sat, static_cast<unsigned>(std::countr_zero(total)));
  }
  return {quarter && halves == 20 && agree == checked,
          std::string("theta(Ga & G!a) = ") + trueness(parse("G a & G !a")).to_string() + ", F psi = 1/2 in " +
              std::to_string(halves) + "/20, brute force " + std::to_string(agree) + "/" + std::to_string(checked)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(77);
  const std::vector<std::string> aps{"a", "b", "c"};
  int si_agree = 0, ql_reported = 0, ql_confirmed = 0;
  const int games = 500;
  for (int i = 0; i < games; ++i) {
    unsigned n = std::uniform_int_distribution<unsigned>(2, 50)(rng);
    Game g = oracle::random_game(rng, n, 6, aps);
    auto sol = zielonka(g);
    Player truth = sol.winner[g.start()];
    auto [s, e] = init_random(g, static_cast<std::uint64_t>(i));
    SIResult r = strategy_improvement(g, s, e);
    si_agree += r.winner == truth && check_winning(g, r.strategy, truth);
    for (RewardVariant v : {RewardVariant::Win, RewardVariant::Pri, RewardVariant::Sem}) {
      LearnerConfig c;
      c.variant = v;
      c.seed = static_cast<std::uint64_t>(i);
      QLResult q = learn(g, c);
      if (!q.winner)
        continue;
      ++ql_reported;
      ql_confirmed += *q.winner == truth && check_winning(g, q.strategy, *q.winner);
    }
  }
  return {si_agree == games && ql_confirmed == ql_reported,
          "SI = zielonka on " + std::to_string(si_agree) + "/" + std::to_string(games) + ", QL confirmed " +
              std::to_string(ql_confirmed) + "/" + std::to_string(ql_reported)};
}

Outcome derivative_correctness() {
  std::mt19937_64 rng(31);
  const std::vector<std::string> aps{"a", "b", "c"};
  int agree = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    Formula f = oracle::random_ltl(rng, aps, 1 + i % 10);
    Letter nu = oracle::random_letter(rng, aps);
    // |uv| <= 6 with a nonempty loop
    std::size_t total = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    std::size_t stem = std::uniform_int_distribution<std::size_t>(0, total - 1)(rng);
    std::vector<Letter> u, v;
    for (std::size_t k = 0; k < total; ++k)
      (k < stem ? u : v).push_back(oracle::random_letter(rng, aps));
    std::vector<Letter> nu_u{nu};
    nu_u.insert(nu_u.end(), u.begin(), u.end());
    bool lhs = oracle::NaiveLasso(nu_u, v).holds(f);
    Formula d = after(f, nu);
    agree += lhs == oracle::NaiveLasso(u, v).holds(d) && lhs == eval_lasso(d, u, v);
  }
  return {agree == trials, std::to_string(agree) + "/" + std::to_string(trials) + " derivatives agree"};
}

// The full benchmark suite: every builtin class at default settings.
std::vector<Model> suite_models() {
  std::vector<Model> all;
  for (const auto& name : builtin_class_names()) {
    ModelSet set = generate_models(builtin_class(name), 100, 1);
    for (auto& m : set.models)
      all.push_back(std::move(m));
  }
  return all;
}

Outcome scaling_invariants() {
  std::size_t games = 0, violations = 0;
  for (const Model& m : suite_models()) {
    ++games;
    PriorityScaling s = scale_priorities(m.game);
    long double below = 0;
    for (std::size_t i = 0; i < s.priorities.size(); ++i) {
      if (i > 0 && !(s.scaled[i] > below))
        ++violations;
      below += s.scaled[i] * static_cast<long double>(s.frequency[i]);
      if (!(std::abs(s.reward[i]) < 1.0))
        ++violations;
      if ((s.reward[i] > 0) != (s.priorities[i] % 2 == 1))
        ++violations;
    }
  }
  return {violations == 0 && games > 0,
          std::to_string(violations) + " violations over " + std::to_string(games) + " games"};
}

std::vector<Model> first_models(const std::string& cls, std::size_t want, std::uint64_t seed) {
  ModelSet set = generate_models(builtin_class(cls), static_cast<unsigned>(4 * want), seed);
  if (set.models.size() > want)
    set.models.resize(want);
  return set.models;
}

Outcome immediate_solving() {
  std::vector<Model> models = first_models("safety", 100, 6);
  for (auto& m : first_models("cosafety", 100, 6))
    models.push_back(std::move(m));
  SuiteOptions o;
  o.runs = 5;
  o.seed = 6;
  auto recs = run_suite(models, {Algo::SI, Algo::SISem}, o);
  std::map<std::string, std::pair<int, int>> imm;  // algo -> (immediate, records)
  for (const auto& r : recs) {
    imm[r.algo].first += r.immediate;
    imm[r.algo].second += 1;
  }
  double si = 100.0 * imm["si"].first / imm["si"].second;
  double sem = 100.0 * imm["si-sem"].first / imm["si-sem"].second;
  return {models.size() >= 100 && sem - si >= 15.0,
          fmt("%.0f formulae, immediately solved SI %.1f%% vs SI_sem %.1f%%", double(models.size()), si, sem)};
}

Outcome ql_ordering() {
  std::map<std::string, std::vector<std::string>> pools{{"(co-)safety", {"safety", "cosafety"}},
                                                        {"near-(co-)safety", {"near-safety", "near-cosafety"}}};
  SuiteOptions o;
  o.runs = 5;
  o.timeout_seconds = 60;
  o.seed = 7;
  bool ok = true;
  std::string detail;
  for (const auto& [pool, classes] : pools) {
    std::vector<Model> models;
    for (const auto& cls : classes)
      for (auto& m : first_models(cls, 50, 7))
        models.push_back(std::move(m));
    auto recs = run_suite(models, {Algo::QLWin, Algo::QLPri, Algo::QLSem}, o);
    std::map<std::string, std::vector<double>> steps;
    for (const auto& r : recs)
      if (!r.timed_out())
        steps[r.algo].push_back(std::max<double>(1.0, static_cast<double>(r.eval_steps)));
    double win = geometric_mean(steps["ql-win"]), pri = geometric_mean(steps["ql-pri"]),
           sem = geometric_mean(steps["ql-sem"]);
    ok = ok && models.size() >= 50 && sem < pri && pri <= win;
    detail += (detail.empty() ? "" : "; ") + pool + " (" + std::to_string(models.size()) + " games) " +
              fmt("sem %.2f, pri %.2f, win %.2f", sem, pri, win);
  }
  return {ok, detail};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
#ifndef SEMGAME_CLI
  return {false, "the CLI target was not built"};
#else
  auto dir = std::filesystem::temp_directory_path() / "semgame_acceptance";
  std::filesystem::create_directories(dir);
  std::string out[2];
  for (int i = 0; i < 2; ++i) {
    out[i] = (dir / ("run" + std::to_string(i) + ".csv")).string();
    std::string cmd = std::string("\"") + SEMGAME_CLI +
                      "\" bench --class near-safety --count 20 --runs 3 --seed 4242 --threads 2 -o \"" + out[i] +
                      "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0)
      return {false, "bench invocation failed"};
  }
  std::string a = slurp(out[0]), b = slurp(out[1]);
  std::filesystem::remove_all(dir);
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
#endif
}

Outcome q_range() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), alpha(0.0, 1.0);
  std::bernoulli_distribution extreme(0.1);
  double q = 0;
  std::size_t out = 0;
  const int updates = 1000000;
  for (int i = 0; i < updates; ++i) {
    double r = extreme(rng) ? (unit(rng) < 0 ? -1.0 : 1.0) : unit(rng);
    double next = extreme(rng) ? (unit(rng) < 0 ? -1.0 : 1.0) : unit(rng);
    q = q_update(q, extreme(rng) ? 1.0 : alpha(rng), r, next);
    out += q < -1.0 || q > 1.0;
  }
  return {out == 0, std::to_string(out) + " of " + std::to_string(updates) + " updates out of range"};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--known-failure")
      known_failures.insert(std::atoi(argv[++i]));
  criterion(1, "fixture fidelity", 1, fixture_fidelity);
  criterion(2, "trueness ground truth", 30, trueness_ground_truth);
  criterion(3, "oracle equivalence", 120, oracle_equivalence);
  criterion(4, "derivative correctness", 60, derivative_correctness);
  criterion(5, "priority scaling invariants", 600, scaling_invariants);
  criterion(6, "trueness initialization solves more games immediately", 600, immediate_solving);
  criterion(7, "semantic rewards need fewer steps", 1800, ql_ordering);
  criterion(8, "bench determinism", 600, determinism);
  criterion(9, "q range", 600, q_range);
  return failures;
}
