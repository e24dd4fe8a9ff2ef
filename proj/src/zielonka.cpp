#include <algorithm>
#include <deque>

#include "semgame/solver_si.hpp"

namespace semgame {

namespace {

class Zielonka {
 public:
  explicit Zielonka(const VertexGame& g) : g_(g), pred_(g.size()), strat_(g.size(), -1), win_(g.size()) {
    for (std::uint32_t v = 0; v < g.size(); ++v)
      for (const auto& arc : g.succ[v])
        pred_[arc.target].push_back(v);
  }

  void run() {
    std::vector<std::uint32_t> all(g_.size());
    for (std::uint32_t v = 0; v < g_.size(); ++v)
      all[v] = v;
    solve(all);
  }

  Player winner(std::uint32_t v) const { return win_[v]; }
  int choice(std::uint32_t v) const { return strat_[v]; }

 private:
  // Vertices of `in` from which `p` forces a visit to `target`. Records the
  // attracting arc for vertices of p.
  std::vector<char> attract(const std::vector<char>& in, const std::vector<std::uint32_t>& target, Player p) {
    std::vector<char> attr(g_.size(), 0);
    std::vector<int> remaining(g_.size(), 0);
    std::deque<std::uint32_t> queue;
    for (auto t : target) {
      attr[t] = 1;
      queue.push_back(t);
    }
    while (!queue.empty()) {
      auto x = queue.front();
      queue.pop_front();
      for (auto u : pred_[x]) {
        if (!in[u] || attr[u])
          continue;
        if (g_.owner[u] == p) {
          attr[u] = 1;
          strat_[u] = arc_to(u, x);
          queue.push_back(u);
        } else {
          if (remaining[u] == 0)
            remaining[u] = arcs_within(u, in) + 1;
          if (--remaining[u] == 1) {
            attr[u] = 1;
            queue.push_back(u);
          }
        }
      }
    }
    return attr;
  }

  int arcs_within(std::uint32_t u, const std::vector<char>& in) const {
    int k = 0;
    for (const auto& arc : g_.succ[u])
      k += in[arc.target] ? 1 : 0;
    return k;
  }

  int arc_to(std::uint32_t u, std::uint32_t x) const {
    for (std::size_t i = 0; i < g_.succ[u].size(); ++i)
      if (g_.succ[u][i].target == x)
        return static_cast<int>(i);
    return -1;
  }

  void solve(const std::vector<std::uint32_t>& verts) {
    if (verts.empty())
      return;
    std::vector<char> in(g_.size(), 0);
    unsigned d = 0;
    for (auto v : verts) {
      in[v] = 1;
      d = std::max(d, g_.priority[v]);
    }
    const Player p = priority_owner(d);
    const Player q = opponent(p);

    std::vector<std::uint32_t> top;
    for (auto v : verts)
      if (g_.priority[v] == d)
        top.push_back(v);
    for (auto t : top)
      if (g_.owner[t] == p)
        for (std::size_t i = 0; i < g_.succ[t].size(); ++i)
          if (in[g_.succ[t][i].target]) {
            strat_[t] = static_cast<int>(i);
            break;
          }

    std::vector<char> a = attract(in, top, p);
    std::vector<std::uint32_t> rest;
    for (auto v : verts)
      if (!a[v])
        rest.push_back(v);
    solve(rest);

    std::vector<std::uint32_t> lost;
    for (auto v : rest)
      if (win_[v] == q)
        lost.push_back(v);
    if (lost.empty()) {
      for (auto v : verts)
        win_[v] = p;
      return;
    }

    std::vector<char> b = attract(in, lost, q);
    std::vector<std::uint32_t> rest2;
    for (auto v : verts) {
      if (b[v])
        win_[v] = q;
      else
        rest2.push_back(v);
    }
    solve(rest2);
  }

  const VertexGame& g_;
  std::vector<std::vector<std::uint32_t>> pred_;
  std::vector<int> strat_;
  std::vector<Player> win_;
};

}  // namespace

ParitySolution zielonka(const Game& game) {
  VertexGame vg = to_vertex_game(game);
  Zielonka z(vg);
  z.run();

  ParitySolution sol;
  const std::size_t n = game.vertex_count();
  sol.winner.resize(n);
  sol.system = Strategy::empty_for(game, Player::System);
  sol.environment = Strategy::empty_for(game, Player::Environment);
  for (VertexId v = 0; v < n; ++v) {
    sol.winner[v] = z.winner(v);
    Strategy& s = game.owner(v) == Player::System ? sol.system : sol.environment;
    if (game.out_edges(v).empty())
      continue;
    int c = z.winner(v) == game.owner(v) ? z.choice(v) : -1;
    s.choice[v] = c >= 0 ? vg.succ[v][c].edge : game.out_edges(v).front();
  }
  return sol;
}

}  // namespace semgame
