#include "semgame/solver_si.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <random>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <optional>

#include "semgame/semantics.hpp"

namespace semgame {

namespace {

// Iterative Tarjan; returns a component id per vertex (-1 when unvisited).
std::vector<int> components(const std::vector<std::vector<std::uint32_t>>& adj, const std::vector<char>& active) {
  const std::size_t n = adj.size();
  std::vector<int> comp(n, -1), index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  int counter = 0, ncomp = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (!active[root] || index[root] >= 0)
      continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i == 0 && index[v] < 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      if (i < adj[v].size()) {
        std::uint32_t w = adj[v][i++];
        if (index[w] < 0)
          call.push_back({w, 0});
        else if (on_stack[w])
          low[v] = std::min(low[v], index[w]);
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty())
        low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

}  // namespace

bool check_winning(const Game& game, const Strategy& strategy, Player player) {
  const std::size_t n = game.vertex_count();
  if (n == 0 || strategy.choice.size() != n)
    return false;
  for (VertexId v = 0; v < n; ++v) {
    if (game.owner(v) != player || game.out_edges(v).empty())
      continue;
    EdgeId c = strategy.choice[v];
    if (c >= game.edge_count() || game.edge(c).src != v)
      return false;
  }
  auto allowed = [&](EdgeId e) {
    VertexId s = game.edge(e).src;
    return game.owner(s) != player || strategy.choice[s] == e;
  };

  std::vector<char> seen(n, 0);
  std::vector<VertexId> queue{game.start()};
  seen[game.start()] = 1;
  std::vector<EdgeId> live;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (EdgeId e : game.out_edges(queue[h])) {
      if (!allowed(e))
        continue;
      live.push_back(e);
      VertexId d = game.edge(e).dst;
      if (!seen[d]) {
        seen[d] = 1;
        queue.push_back(d);
      }
    }

  std::vector<unsigned> bad;
  for (EdgeId e : live)
    if (priority_owner(game.edge(e).priority) != player)
      bad.push_back(game.edge(e).priority);
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());

  for (unsigned q : bad) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (EdgeId e : live)
      if (game.edge(e).priority <= q)
        adj[game.edge(e).src].push_back(game.edge(e).dst);
    auto comp = components(adj, seen);
    for (EdgeId e : live) {
      const Edge& edge = game.edge(e);
      if (edge.priority == q && comp[edge.src] >= 0 && comp[edge.src] == comp[edge.dst])
        return false;
    }
  }
  return true;
}

std::pair<Strategy, Strategy> init_random(const Game& game, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto sys = Strategy::empty_for(game, Player::System);
  auto env = Strategy::empty_for(game, Player::Environment);
  for (VertexId v = 0; v < game.vertex_count(); ++v) {
    auto out = game.out_edges(v);
    if (out.empty())
      continue;
    std::uniform_int_distribution<std::size_t> pick(0, out.size() - 1);
    (game.owner(v) == Player::System ? sys : env).choice[v] = out[pick(rng)];
  }
  return {sys, env};
}

std::pair<Strategy, Strategy> init_trueness(const Game& game) {
  if (!game.labelled())
    throw std::invalid_argument("trueness initialization needs a labelled game");
  TruenessCache cache;
  auto sys = Strategy::empty_for(game, Player::System);
  auto env = Strategy::empty_for(game, Player::Environment);
  for (VertexId v = 0; v < game.vertex_count(); ++v) {
    auto out = game.out_edges(v);
    if (out.empty())
      continue;
    const bool maximize = game.owner(v) == Player::System;
    EdgeId best = out.front();
    TruenessValue best_theta = cache.master(game, game.edge(best).dst);
    double best_prog = progress(game, best, cache);
    for (EdgeId e : out.subspan(1)) {
      TruenessValue theta = cache.master(game, game.edge(e).dst);
      double prog = progress(game, e, cache);
      auto key = [&](const TruenessValue& t, double p) { return std::make_tuple(t, p); };
      bool better = maximize ? key(theta, prog) > key(best_theta, best_prog)
                             : key(theta, prog) < key(best_theta, best_prog);
      bool tie = key(theta, prog) == key(best_theta, best_prog);
      if (better || (tie && std::make_pair(game.edge(e).dst, e) < std::make_pair(game.edge(best).dst, best))) {
        best = e;
        best_theta = theta;
        best_prog = prog;
      }
    }
    (maximize ? sys : env).choice[v] = best;
  }
  return {sys, env};
}

namespace {

// Discrete strategy valuation and improvement for one player on the vertex
// priority view. Relevance is the order (priority, vertex id).
class Improver {
 public:
  struct Value {
    std::uint32_t loop = 0;
    std::vector<std::uint32_t> path;  // ranks, most relevant first
    std::uint32_t dist = 0;
  };

  Improver(const VertexGame& g, Player p) : g_(g), p_(p), n_(static_cast<std::uint32_t>(g.size())) {
    std::vector<std::uint32_t> byrank(n_);
    for (std::uint32_t v = 0; v < n_; ++v)
      byrank[v] = v;
    std::sort(byrank.begin(), byrank.end(), [&](auto a, auto b) {
      return std::tie(g_.priority[a], a) < std::tie(g_.priority[b], b);
    });
    rank_.resize(n_);
    vertex_of_.resize(n_);
    good_.resize(n_);
    for (std::uint32_t r = 0; r < n_; ++r) {
      rank_[byrank[r]] = r;
      vertex_of_[r] = byrank[r];
      good_[r] = priority_owner(g_.priority[byrank[r]]) == p_;
    }
    // bad vertices, most relevant first, then good ones, least relevant first
    for (std::uint32_t r = n_; r-- > 0;)
      if (!good_[r])
        reward_order_.push_back(vertex_of_[r]);
    for (std::uint32_t r = 0; r < n_; ++r)
      if (good_[r])
        reward_order_.push_back(vertex_of_[r]);
    reward_.resize(n_);
    for (std::uint32_t i = 0; i < n_; ++i)
      reward_[reward_order_[i]] = i;
  }

  // Returns true if some choice changed.
  bool improve(std::vector<int>& sigma) {
    auto val = valuate(sigma);
    bool changed = false;
    for (std::uint32_t v = 0; v < n_; ++v) {
      if (g_.owner[v] != p_ || g_.succ[v].size() < 2)
        continue;
      const auto& succ = g_.succ[v];
      int best = sigma[v];
      for (int i = 0; i < static_cast<int>(succ.size()); ++i) {
        int c = compare(val[succ[i].target], val[succ[best].target]);
        if (c > 0 || (c == 0 && tiebreak(succ[i], succ[best])))
          best = i;
      }
      if (compare(val[succ[best].target], val[succ[sigma[v]].target]) > 0) {
        sigma[v] = best;
        changed = true;
      }
    }
    return changed;
  }

  std::vector<Value> valuate(const std::vector<int>& sigma) {
    std::vector<std::vector<std::uint32_t>> out(n_), in(n_);
    for (std::uint32_t v = 0; v < n_; ++v) {
      if (g_.owner[v] == p_) {
        out[v].push_back(g_.succ[v][sigma[v]].target);
      } else {
        for (const auto& arc : g_.succ[v])
          out[v].push_back(arc.target);
      }
      for (auto t : out[v])
        in[t].push_back(v);
    }

    std::vector<Value> val(n_);
    std::vector<char> valued(n_, 0);
    std::vector<std::uint32_t> mark(n_, 0);
    std::uint32_t stamp = 0;
    for (std::uint32_t w : reward_order_) {
      if (valued[w])
        continue;
      // is w on a cycle through unvalued vertices no more relevant than w?
      ++stamp;
      bool cycle = false;
      std::vector<std::uint32_t> stack;
      for (auto t : out[w])
        if (!valued[t] && rank_[t] <= rank_[w] && mark[t] != stamp) {
          mark[t] = stamp;
          stack.push_back(t);
        }
      while (!stack.empty() && !cycle) {
        auto x = stack.back();
        stack.pop_back();
        if (x == w) {
          cycle = true;
          break;
        }
        for (auto t : out[x])
          if (!valued[t] && rank_[t] <= rank_[w] && mark[t] != stamp) {
            mark[t] = stamp;
            stack.push_back(t);
          }
      }
      if (!cycle)
        continue;

      ++stamp;
      std::vector<std::uint32_t> k{w};
      mark[w] = stamp;
      for (std::size_t h = 0; h < k.size(); ++h)
        for (auto s : in[k[h]])
          if (!valued[s] && mark[s] != stamp) {
            mark[s] = stamp;
            k.push_back(s);
          }
      subvaluate(k, w, out, val);
      for (auto v : k)
        valued[v] = 1;
    }
    for (std::uint32_t v = 0; v < n_; ++v)
      if (!valued[v])
        throw std::logic_error("strategy valuation left a vertex unvalued");
    return val;
  }

  int compare(const Value& a, const Value& b) const {
    if (a.loop != b.loop)
      return reward_[a.loop] < reward_[b.loop] ? -1 : 1;
    std::size_t i = 0;
    while (i < a.path.size() && i < b.path.size() && a.path[i] == b.path[i])
      ++i;
    bool in_a = i < a.path.size(), in_b = i < b.path.size();
    if (in_a || in_b) {
      std::uint32_t z;
      bool from_a;
      if (in_a && in_b) {
        from_a = a.path[i] > b.path[i];
        z = from_a ? a.path[i] : b.path[i];
      } else {
        from_a = in_a;
        z = in_a ? a.path[i] : b.path[i];
      }
      return (from_a == static_cast<bool>(good_[z])) ? 1 : -1;
    }
    if (a.dist == b.dist)
      return 0;
    bool shorter = a.dist < b.dist;
    return shorter == static_cast<bool>(good_[rank_[a.loop]]) ? 1 : -1;
  }

 private:
  bool tiebreak(const VertexGame::Arc& a, const VertexGame::Arc& b) const {
    auto dst = [&](const VertexGame::Arc& arc) {
      return arc.target < g_.original_vertices ? arc.target : g_.succ[arc.target].front().target;
    };
    return std::make_pair(dst(a), a.edge) < std::make_pair(dst(b), b.edge);
  }

  void subvaluate(const std::vector<std::uint32_t>& k, std::uint32_t w,
                  const std::vector<std::vector<std::uint32_t>>& out, std::vector<Value>& val) {
    std::vector<char> ink(n_, 0);
    for (auto v : k)
      ink[v] = 1;
    // local copy of the graph induced by K
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> adj;
    for (auto v : k) {
      auto& a = adj[v];
      if (v == w)
        continue;
      for (auto t : out[v])
        if (ink[t])
          a.push_back(t);
    }
    auto reverse = [&] {
      std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> r;
      for (auto& [v, ts] : adj)
        for (auto t : ts)
          r[t].push_back(v);
      return r;
    };
    auto backward = [&](std::uint32_t from, std::optional<std::uint32_t> avoid) {
      auto r = reverse();
      std::vector<char> hit(n_, 0);
      if (avoid && *avoid == from)
        return hit;
      std::vector<std::uint32_t> queue{from};
      hit[from] = 1;
      for (std::size_t h = 0; h < queue.size(); ++h)
        for (auto s : r[queue[h]])
          if (!hit[s] && (!avoid || s != *avoid)) {
            hit[s] = 1;
            queue.push_back(s);
          }
      return hit;
    };

    for (auto v : k) {
      val[v].loop = w;
      val[v].path.clear();
    }
    std::vector<std::uint32_t> above;
    for (auto v : k)
      if (rank_[v] > rank_[w])
        above.push_back(v);
    std::sort(above.begin(), above.end(), [&](auto a, auto b) { return rank_[a] > rank_[b]; });

    for (auto u : above) {
      if (good_[rank_[u]]) {
        auto reach = backward(w, u);
        for (auto v : k)
          if (!reach[v])
            val[v].path.push_back(rank_[u]);
        for (auto& [v, ts] : adj)
          if (reach[v] || v == u)
            std::erase_if(ts, [&](auto t) { return !reach[t]; });
      } else {
        auto reach = backward(u, std::nullopt);
        for (auto v : k)
          if (reach[v])
            val[v].path.push_back(rank_[u]);
        for (auto& [v, ts] : adj) {
          if (v == u)
            std::erase_if(ts, [&](auto t) { return reach[t]; });
          else if (reach[v])
            std::erase_if(ts, [&](auto t) { return !reach[t]; });
        }
      }
    }

    if (good_[rank_[w]]) {
      // the opponent delays reaching a good loop: longest paths
      std::vector<int> state(n_, 0);
      std::function<std::uint32_t(std::uint32_t)> longest = [&](std::uint32_t v) -> std::uint32_t {
        if (v == w)
          return 0;
        if (state[v] == 2)
          return val[v].dist;
        if (state[v] == 1)
          throw std::logic_error("cycle below a good loop during valuation");
        state[v] = 1;
        std::uint32_t best = 0;
        bool any = false;
        for (auto t : adj[v]) {
          std::uint32_t d = longest(t) + 1;
          if (!any || d > best)
            best = d;
          any = true;
        }
        if (!any)
          throw std::logic_error("vertex cut off from its loop during valuation");
        val[v].dist = best;
        state[v] = 2;
        return best;
      };
      val[w].dist = 0;
      for (auto v : k)
        longest(v);
    } else {
      auto r = reverse();
      std::vector<char> hit(n_, 0);
      std::vector<std::uint32_t> queue{w};
      hit[w] = 1;
      val[w].dist = 0;
      for (std::size_t h = 0; h < queue.size(); ++h)
        for (auto s : r[queue[h]])
          if (!hit[s]) {
            hit[s] = 1;
            val[s].dist = val[queue[h]].dist + 1;
            queue.push_back(s);
          }
      for (auto v : k)
        if (!hit[v])
          throw std::logic_error("vertex cut off from its loop during valuation");
    }
  }

  const VertexGame& g_;
  Player p_;
  std::uint32_t n_;
  std::vector<std::uint32_t> rank_, vertex_of_, reward_order_, reward_;
  std::vector<char> good_;
};

std::vector<int> to_arcs(const Game& game, const VertexGame& vg, const Strategy& s) {
  std::vector<int> sigma(vg.size(), 0);
  for (VertexId v = 0; v < game.vertex_count(); ++v) {
    if (game.owner(v) != s.player)
      continue;
    for (std::size_t i = 0; i < vg.succ[v].size(); ++i)
      if (vg.succ[v][i].edge == s.choice[v])
        sigma[v] = static_cast<int>(i);
  }
  return sigma;
}

Strategy to_strategy(const Game& game, const VertexGame& vg, const std::vector<int>& sigma, Player p) {
  auto s = Strategy::empty_for(game, p);
  for (VertexId v = 0; v < game.vertex_count(); ++v)
    if (game.owner(v) == p && !vg.succ[v].empty())
      s.choice[v] = vg.succ[v][sigma[v]].edge;
  return s;
}

}  // namespace

SIResult strategy_improvement(const Game& game, Strategy system, Strategy environment, const SIOptions& options) {
  if (auto problems = validate(game, {.check_alternation = false}); !problems.empty())
    throw std::invalid_argument("invalid game: " + problems.front());
  const VertexGame vg = to_vertex_game(game);
  std::vector<int> sigma0 = to_arcs(game, vg, system);
  std::vector<int> sigma1 = to_arcs(game, vg, environment);
  Improver imp0(vg, Player::System), imp1(vg, Player::Environment);
  const std::uint64_t n = game.vertex_count();

  SIResult result;
  for (;;) {
    ++result.iterations;
    result.eval_steps = result.iterations * n;
    Strategy s0 = to_strategy(game, vg, sigma0, Player::System);
    Strategy s1 = to_strategy(game, vg, sigma1, Player::Environment);
    std::optional<Player> w;
    if (check_winning(game, s0, Player::System)) {
      w = Player::System;
      result.strategy = std::move(s0);
    } else if (check_winning(game, s1, Player::Environment)) {
      w = Player::Environment;
      result.strategy = std::move(s1);
    }
    if (w) {
      result.winner = w;
      result.immediate = result.iterations == 1;
      return result;
    }
    bool over_budget = options.max_eval_steps && (result.iterations + 1) * n > options.max_eval_steps;
    bool late = options.deadline && std::chrono::steady_clock::now() > *options.deadline;
    if (over_budget || late) {
      result.timeout = true;
      return result;
    }
    bool changed0 = imp0.improve(sigma0);
    bool changed1 = imp1.improve(sigma1);
    if (!changed0 && !changed1)
      throw std::logic_error("strategy improvement stalled without a winning strategy");
  }
}

}  // namespace semgame
