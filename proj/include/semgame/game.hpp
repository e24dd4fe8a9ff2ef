#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semgame/ltl.hpp"

namespace semgame {

enum class Player : std::uint8_t { System = 0, Environment = 1 };

constexpr Player opponent(Player p) { return p == Player::System ? Player::Environment : Player::System; }
constexpr int index(Player p) { return static_cast<int>(p); }
/// Parity convention: the system wins a play iff the maximal priority seen
/// infinitely often is odd.
constexpr Player priority_owner(unsigned priority) { return priority % 2 == 1 ? Player::System : Player::Environment; }
const char* to_string(Player p);

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

/// One monitor of the labelling: its identity and the obligations it tracks.
struct Monitor {
  int id = 0;
  std::vector<Formula> obligations;
  friend bool operator==(const Monitor&, const Monitor&) = default;
};

/// Semantic label of a vertex. Monitors are listed in appearance-record
/// order, position 0 being the front (lowest rank).
struct Labelling {
  Formula master;
  std::vector<Monitor> monitors;
  friend bool operator==(const Labelling&, const Labelling&) = default;
};

/// Partial letter: values of the propositions set by the moving player.
using Move = std::map<std::string, bool>;

struct Vertex {
  Player owner = Player::System;
  std::optional<Labelling> label;
};

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  unsigned priority = 0;
  Move move;
};

/// Parity game with priorities on edges and an optional semantic labelling
/// per vertex.
class Game {
 public:
  VertexId add_vertex(Player owner, std::optional<Labelling> label = std::nullopt);
  EdgeId add_edge(VertexId src, VertexId dst, unsigned priority, Move move = {});
  void set_start(VertexId v) { start_ = v; }
  void set_inputs(std::vector<std::string> aps) { inputs_ = std::move(aps); }
  void set_outputs(std::vector<std::string> aps) { outputs_ = std::move(aps); }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  VertexId start() const { return start_; }
  const Vertex& vertex(VertexId v) const { return vertices_[v]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const EdgeId> out_edges(VertexId v) const { return out_[v]; }
  Player owner(VertexId v) const { return vertices_[v].owner; }
  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  unsigned max_priority() const { return max_priority_; }

  /// True when every vertex carries a labelling.
  bool labelled() const;
  /// Winner of a sink: a vertex whose only outgoing edge is a self-loop.
  std::optional<Player> sink_winner(VertexId v) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::string> inputs_, outputs_;
  VertexId start_ = 0;
  unsigned max_priority_ = 0;
};

/// Positional strategy of one player: one outgoing edge per owned vertex.
struct Strategy {
  Player player = Player::System;
  std::vector<EdgeId> choice;  // kNoEdge on vertices of the other player

  static Strategy empty_for(const Game& game, Player p);
  EdgeId operator[](VertexId v) const { return choice[v]; }
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Ultimately periodic play, given as edges: stem then a closed cycle.
struct Lasso {
  std::vector<EdgeId> stem;
  std::vector<EdgeId> cycle;
};

struct ValidateOptions {
  bool check_alternation = true;
};

/// Empty result means the game is well formed.
std::vector<std::string> validate(const Game& game, ValidateOptions options = {});

/// Builds a lasso from vertex sequences, using the first edge between
/// consecutive vertices. The cycle closes from its last vertex to its first.
Lasso lasso_from_vertices(const Game& game, std::span<const VertexId> stem, std::span<const VertexId> cycle);
Player lasso_winner(const Game& game, const Lasso& lasso);

/// Vertices reachable from the start when `strategy`'s player follows it and
/// the opponent moves arbitrarily.
std::vector<bool> reachable_under(const Game& game, const Strategy& strategy);
double solution_size(const Game& game, const Strategy& strategy);

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& pointer, const std::string& msg);
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

Game game_from_json(const std::string& text);
std::string game_to_json(const Game& game, int indent = 1);
Game load_game(const std::string& path);
void store_game(const Game& game, const std::string& path);

}  // namespace semgame
