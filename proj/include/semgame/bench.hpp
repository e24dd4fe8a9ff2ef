#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semgame/game.hpp"
#include "semgame/ltl.hpp"
#include "semgame/solver_ql.hpp"

namespace semgame {

/// Operator weights in the order and, or, G, F, X, U.
using OperatorWeights = std::array<double, 6>;

struct FormulaClassSpec {
  std::string name;
  OperatorWeights weights{};
  unsigned size = 12;  // syntax-tree nodes, leaves included
  unsigned aps = 4;
};

/// safety, cosafety, near-safety, near-cosafety, parity.
FormulaClassSpec builtin_class(const std::string& name);
std::vector<std::string> builtin_class_names();

/// Proposition names a, b, c, ...; even indices are inputs, odd are outputs.
std::vector<std::string> ap_names(unsigned count);

/// Random syntax tree with exactly `spec.size` nodes before simplification.
/// Leaves are literals over the first `spec.aps` propositions.
Formula random_formula(const FormulaClassSpec& spec, std::uint64_t seed);

struct Model {
  std::string id;
  std::string cls;
  Formula formula;
  Game game;
};

struct FilteredModel {
  std::string id;
  std::string formula;
  std::string reason;
};

struct ModelSet {
  std::vector<Model> models;
  std::vector<FilteredModel> filtered;
};

ModelSet generate_models(const FormulaClassSpec& spec, unsigned count, std::uint64_t seed,
                         std::size_t max_vertices = 10000);

enum class Algo { SI, SISem, QLWin, QLPri, QLSem };
const char* to_string(Algo a);
Algo parse_algo(const std::string& name);
std::vector<Algo> all_algos();

struct BenchRecord {
  std::string model;
  std::string cls;
  std::string algo;
  unsigned run = 0;
  std::uint64_t seed = 0;
  std::string winner;  // "system", "environment" or empty
  std::uint64_t eval_steps = 0;
  double solution_size = 0;
  bool immediate = false;
  std::uint64_t wall_ms = 0;
  std::string timeout;  // "0", "steps" or "wall"

  bool timed_out() const { return timeout != "0"; }
};

struct SuiteOptions {
  unsigned runs = 5;
  double timeout_seconds = 60;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool timing = false;   // record wall_ms; off keeps the CSV reproducible
  LearnerConfig ql;      // variant and seed are set per record
};

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

BenchRecord run_cell(const Model& model, Algo algo, unsigned run, std::uint64_t seed, const SuiteOptions& options);
std::vector<BenchRecord> run_suite(const std::vector<Model>& models, const std::vector<Algo>& algos,
                                   const SuiteOptions& options);

std::string csv_header();
std::string to_csv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> parse_csv(const std::string& text);

double geometric_mean(const std::vector<double>& xs);

struct CellSummary {
  std::string cls;
  std::string algo;
  std::size_t records = 0;
  std::size_t timeouts = 0;
  std::optional<double> mean_steps;  // geometric, over records without timeout
  std::optional<double> mean_solution_size;
  std::optional<double> immediate_percent;  // SI variants only
  double timeout_percent = 0;
};

std::vector<CellSummary> aggregate(const std::vector<BenchRecord>& records);
std::string format_report(const std::vector<CellSummary>& summary);
/// Writes one file of sorted step counts per (class, algo); returns the paths.
std::vector<std::string> write_step_distributions(const std::vector<BenchRecord>& records, const std::string& prefix);

}  // namespace semgame
