#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "semgame/game.hpp"

namespace semgame {

/// Vertex-priority view of an edge-priority game: every edge with a positive
/// priority is routed through a fresh vertex carrying that priority.
struct VertexGame {
  struct Arc {
    std::uint32_t target;
    EdgeId edge;  // originating edge of the edge-priority game
  };
  std::vector<unsigned> priority;
  std::vector<Player> owner;
  std::vector<std::vector<Arc>> succ;
  std::size_t original_vertices = 0;

  std::size_t size() const { return priority.size(); }
};

VertexGame to_vertex_game(const Game& game);

struct ParitySolution {
  std::vector<Player> winner;  // per vertex
  Strategy system;             // winning on the system region
  Strategy environment;        // winning on the environment region
};

ParitySolution zielonka(const Game& game);

/// True iff `player` wins from the start vertex by following `strategy`.
bool check_winning(const Game& game, const Strategy& strategy, Player player);

std::pair<Strategy, Strategy> init_random(const Game& game, std::uint64_t seed);
/// Requires a labelled game.
std::pair<Strategy, Strategy> init_trueness(const Game& game);

struct SIOptions {
  /// Stop with a timeout once eval_steps would exceed this; 0 = unbounded.
  std::uint64_t max_eval_steps = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SIResult {
  std::optional<Player> winner;  // empty on timeout
  Strategy strategy;             // winning strategy of the winner
  std::size_t iterations = 0;    // valuation rounds, the first one included
  std::uint64_t eval_steps = 0;  // iterations * |V|
  bool immediate = false;        // an initial strategy already wins
  bool timeout = false;
};

SIResult strategy_improvement(const Game& game, Strategy system, Strategy environment, const SIOptions& options = {});

}  // namespace semgame
