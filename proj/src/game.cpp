#include "semgame/game.hpp"

#include <algorithm>
#include <deque>

namespace semgame {

const char* to_string(Player p) { return p == Player::System ? "system" : "environment"; }

VertexId Game::add_vertex(Player owner, std::optional<Labelling> label) {
  vertices_.push_back({owner, std::move(label)});
  out_.emplace_back();
  return static_cast<VertexId>(vertices_.size() - 1);
}

EdgeId Game::add_edge(VertexId src, VertexId dst, unsigned priority, Move move) {
  if (src >= vertices_.size() || dst >= vertices_.size())
    throw std::out_of_range("add_edge: vertex id out of range");
  edges_.push_back({src, dst, priority, std::move(move)});
  auto id = static_cast<EdgeId>(edges_.size() - 1);
  out_[src].push_back(id);
  max_priority_ = std::max(max_priority_, priority);
  return id;
}

bool Game::labelled() const {
  return !vertices_.empty() &&
         std::all_of(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.label.has_value(); });
}

std::optional<Player> Game::sink_winner(VertexId v) const {
  if (out_[v].size() != 1)
    return std::nullopt;
  const Edge& e = edges_[out_[v].front()];
  if (e.dst != v)
    return std::nullopt;
  return priority_owner(e.priority);
}

Strategy Strategy::empty_for(const Game& game, Player p) {
  return Strategy{p, std::vector<EdgeId>(game.vertex_count(), kNoEdge)};
}

std::vector<std::string> validate(const Game& game, ValidateOptions options) {
  std::vector<std::string> problems;
  const auto n = game.vertex_count();
  if (n == 0) {
    problems.push_back("game has no vertices");
    return problems;
  }
  if (game.start() >= n)
    problems.push_back("start vertex " + std::to_string(game.start()) + " does not exist");
  for (VertexId v = 0; v < n; ++v)
    if (game.out_edges(v).empty())
      problems.push_back("vertex " + std::to_string(v) + " has no outgoing edge");
  if (options.check_alternation) {
    for (EdgeId e = 0; e < game.edge_count(); ++e) {
      const Edge& edge = game.edge(e);
      if (game.owner(edge.src) != game.owner(edge.dst) && edge.src != edge.dst)
        continue;
      // sinks keep a self-loop
      if (edge.src == edge.dst && game.sink_winner(edge.src))
        continue;
      problems.push_back("edge " + std::to_string(e) + " (" + std::to_string(edge.src) + " -> " +
                         std::to_string(edge.dst) + ") does not alternate players");
    }
  }
  return problems;
}

Lasso lasso_from_vertices(const Game& game, std::span<const VertexId> stem, std::span<const VertexId> cycle) {
  if (cycle.empty())
    throw std::invalid_argument("lasso: cycle must be nonempty");
  auto edge_between = [&](VertexId a, VertexId b) {
    for (EdgeId e : game.out_edges(a))
      if (game.edge(e).dst == b)
        return e;
    throw std::invalid_argument("lasso: no edge " + std::to_string(a) + " -> " + std::to_string(b));
  };
  Lasso lasso;
  std::vector<VertexId> seq(stem.begin(), stem.end());
  seq.push_back(cycle.front());
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    lasso.stem.push_back(edge_between(seq[i], seq[i + 1]));
  for (std::size_t i = 0; i < cycle.size(); ++i)
    lasso.cycle.push_back(edge_between(cycle[i], cycle[(i + 1) % cycle.size()]));
  return lasso;
}

Player lasso_winner(const Game& game, const Lasso& lasso) {
  if (lasso.cycle.empty())
    throw std::invalid_argument("lasso: cycle must be nonempty");
  unsigned best = 0;
  for (EdgeId e : lasso.cycle)
    best = std::max(best, game.edge(e).priority);
  return priority_owner(best);
}

std::vector<bool> reachable_under(const Game& game, const Strategy& strategy) {
  std::vector<bool> seen(game.vertex_count(), false);
  std::deque<VertexId> queue{game.start()};
  seen[game.start()] = true;
  auto visit = [&](VertexId u) {
    if (!seen[u]) {
      seen[u] = true;
      queue.push_back(u);
    }
  };
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (game.owner(v) == strategy.player && strategy.choice[v] != kNoEdge) {
      visit(game.edge(strategy.choice[v]).dst);
    } else {
      for (EdgeId e : game.out_edges(v))
        visit(game.edge(e).dst);
    }
  }
  return seen;
}

double solution_size(const Game& game, const Strategy& strategy) {
  auto seen = reachable_under(game, strategy);
  auto count = std::count(seen.begin(), seen.end(), true);
  return static_cast<double>(count) / static_cast<double>(game.vertex_count());
}

}  // namespace semgame
