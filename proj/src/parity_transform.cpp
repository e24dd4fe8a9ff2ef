#include "semgame/solver_si.hpp"

namespace semgame {

VertexGame to_vertex_game(const Game& game) {
  VertexGame vg;
  const std::size_t n = game.vertex_count();
  vg.original_vertices = n;
  vg.priority.assign(n, 0);
  vg.owner.resize(n);
  vg.succ.resize(n);
  for (VertexId v = 0; v < n; ++v)
    vg.owner[v] = game.owner(v);
  for (EdgeId e = 0; e < game.edge_count(); ++e) {
    const Edge& edge = game.edge(e);
    if (edge.priority == 0) {
      vg.succ[edge.src].push_back({edge.dst, e});
      continue;
    }
    auto mid = static_cast<std::uint32_t>(vg.priority.size());
    vg.priority.push_back(edge.priority);
    vg.owner.push_back(game.owner(edge.src));
    vg.succ.push_back({{edge.dst, e}});
    vg.succ[edge.src].push_back({mid, e});
  }
  return vg;
}

}  // namespace semgame
