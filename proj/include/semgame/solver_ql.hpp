#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "semgame/game.hpp"
#include "semgame/semantics.hpp"

namespace semgame {

enum class RewardVariant { Win, Pri, Sem };
const char* to_string(RewardVariant v);

/// Priorities rescaled so that each one outweighs all smaller ones together,
/// then normalized into (-1, 1). Frequencies count edges per priority.
struct PriorityScaling {
  std::vector<unsigned> priorities;     // sorted, distinct
  std::vector<std::uint64_t> frequency;
  std::vector<long double> scaled;
  std::vector<double> reward;

  double reward_of(unsigned priority) const;
};

PriorityScaling scale_priorities(const Game& game);

/// One value per edge. Edges into decided sinks are pinned to +1 / -1.
struct QTable {
  std::vector<double> q;
  std::vector<char> pinned;

  double operator[](EdgeId e) const { return q[e]; }
};

QTable init_q(const Game& game, RewardVariant variant);

struct LearnerConfig {
  RewardVariant variant = RewardVariant::Pri;
  double alpha = 0.1;
  double epsilon = 0.1;
  unsigned check_period = 10;
  std::uint64_t budget = 100000;  // visited vertices over all episodes
  std::uint64_t seed = 0;
  double progress_weight = 0.5;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// A walk that stops at its first repeated vertex. `vertices` ends with the
/// repeated vertex; the loop is edges[loop_start..].
struct Episode {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  std::size_t loop_start = 0;
};

Episode sample_episode(const Game& game, const QTable& table, double epsilon, std::mt19937_64& rng);

double reward(const Game& game, EdgeId e, RewardVariant variant, const PriorityScaling& scaling,
              TruenessCache& cache, double progress_weight = 0.5);

/// One temporal-difference step, clamped to [-1, 1].
double q_update(double q, double alpha, double reward, double next_value);

/// Value of a vertex: max over its edges for the system, min for the
/// environment.
double vertex_value(const Game& game, const QTable& table, VertexId v);

/// Greedy choice per vertex of `player`. Ties go to the smallest
/// `tie_rank[e]` when a rank per edge is given, else to the smallest target id.
Strategy greedy_strategy(const Game& game, const QTable& table, Player player,
                         std::span<const std::uint32_t> tie_rank = {});

struct QLResult {
  std::optional<Player> winner;  // empty when the budget ran out
  Strategy strategy;
  std::uint64_t eval_steps = 0;
  std::uint64_t episodes = 0;
  std::uint64_t checks = 0;
  bool immediate = false;  // the initial greedy strategy already wins
  bool timeout = false;
};

QLResult learn(const Game& game, const LearnerConfig& config, std::optional<QTable> initial = std::nullopt);

}  // namespace semgame
