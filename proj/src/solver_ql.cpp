#include "semgame/solver_ql.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "semgame/solver_si.hpp"

namespace semgame {

const char* to_string(RewardVariant v) {
  switch (v) {
    case RewardVariant::Win: return "win";
    case RewardVariant::Pri: return "pri";
    case RewardVariant::Sem: return "sem";
  }
  return "?";
}

double PriorityScaling::reward_of(unsigned priority) const {
  auto it = std::lower_bound(priorities.begin(), priorities.end(), priority);
  if (it == priorities.end() || *it != priority)
    throw std::out_of_range("priority " + std::to_string(priority) + " not in scaling table");
  return reward[it - priorities.begin()];
}

PriorityScaling scale_priorities(const Game& game) {
  std::map<unsigned, std::uint64_t> freq;
  for (const Edge& e : game.edges())
    ++freq[e.priority];
  PriorityScaling s;
  for (auto [p, f] : freq) {
    s.priorities.push_back(p);
    s.frequency.push_back(f);
  }
  long double norm = 1;
  for (std::size_t i = 0; i < s.priorities.size(); ++i) {
    long double v = i == 0 ? static_cast<long double>(s.priorities[0])
                           : 2.0L * static_cast<long double>(s.frequency[i - 1]) * s.scaled[i - 1] + 1.0L;
    s.scaled.push_back(v);
    norm += v * static_cast<long double>(s.frequency[i]);
  }
  for (std::size_t i = 0; i < s.priorities.size(); ++i) {
    long double r = s.scaled[i] / norm;
    s.reward.push_back(static_cast<double>(s.priorities[i] % 2 == 1 ? r : -r));
  }
  return s;
}

namespace {

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

std::optional<double> pinned_value(const Game& game, EdgeId e) {
  if (auto w = game.sink_winner(game.edge(e).dst))
    return *w == Player::System ? 1.0 : -1.0;
  return std::nullopt;
}

}  // namespace

QTable init_q(const Game& game, RewardVariant variant) {
  QTable t;
  t.q.assign(game.edge_count(), 0.0);
  t.pinned.assign(game.edge_count(), 0);
  std::optional<TruenessCache> cache;
  if (variant == RewardVariant::Sem) {
    if (!game.labelled())
      throw std::invalid_argument("semantic rewards need a labelled game");
    cache.emplace();
  }
  for (EdgeId e = 0; e < game.edge_count(); ++e) {
    if (auto v = pinned_value(game, e)) {
      t.q[e] = *v;
      t.pinned[e] = 1;
    } else if (cache) {
      t.q[e] = 2.0 * cache->master(game, game.edge(e).dst).to_double() - 1.0;
    }
  }
  return t;
}

double q_update(double q, double alpha, double reward, double next_value) {
  return clamp1((1 - alpha) * q + alpha * (reward + next_value));
}

double vertex_value(const Game& game, const QTable& table, VertexId v) {
  auto out = game.out_edges(v);
  if (out.empty())
    return 0.0;
  const bool sys = game.owner(v) == Player::System;
  double best = table[out.front()];
  for (EdgeId e : out)
    best = sys ? std::max(best, table[e]) : std::min(best, table[e]);
  return best;
}

Strategy greedy_strategy(const Game& game, const QTable& table, Player player,
                         std::span<const std::uint32_t> tie_rank) {
  // lower key wins a tie: the given rank, else the target id
  auto key = [&](EdgeId e) {
    return std::make_pair(tie_rank.empty() ? game.edge(e).dst : tie_rank[e], e);
  };
  auto s = Strategy::empty_for(game, player);
  for (VertexId v = 0; v < game.vertex_count(); ++v) {
    if (game.owner(v) != player || game.out_edges(v).empty())
      continue;
    EdgeId best = kNoEdge;
    for (EdgeId e : game.out_edges(v)) {
      if (best == kNoEdge) {
        best = e;
        continue;
      }
      double a = table[e], b = table[best];
      bool better = player == Player::System ? a > b : a < b;
      if (better || (a == b && key(e) < key(best)))
        best = e;
    }
    s.choice[v] = best;
  }
  return s;
}

Episode sample_episode(const Game& game, const QTable& table, double epsilon, std::mt19937_64& rng) {
  Episode ep;
  std::unordered_map<VertexId, std::size_t> seen;
  VertexId v = game.start();
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<EdgeId> ties;
  for (;;) {
    seen.emplace(v, ep.vertices.size());
    ep.vertices.push_back(v);
    auto out = game.out_edges(v);
    if (out.empty())
      throw std::invalid_argument("vertex " + std::to_string(v) + " has no successor");
    EdgeId pick;
    if (coin(rng) < epsilon) {
      pick = out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)];
    } else {
      double target = vertex_value(game, table, v);
      ties.clear();
      for (EdgeId e : out)
        if (table[e] == target)
          ties.push_back(e);
      pick = ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
    }
    ep.edges.push_back(pick);
    v = game.edge(pick).dst;
    if (auto it = seen.find(v); it != seen.end()) {
      ep.loop_start = it->second;
      ep.vertices.push_back(v);
      return ep;
    }
  }
}

double reward(const Game& game, EdgeId e, RewardVariant variant, const PriorityScaling& scaling,
              TruenessCache& cache, double progress_weight) {
  switch (variant) {
    case RewardVariant::Win:
      return 0.0;
    case RewardVariant::Pri:
      return scaling.reward_of(game.edge(e).priority);
    case RewardVariant::Sem:
      return clamp1(scaling.reward_of(game.edge(e).priority) + progress_weight * progress(game, e, cache));
  }
  return 0.0;
}

QLResult learn(const Game& game, const LearnerConfig& config, std::optional<QTable> initial) {
  if (auto problems = validate(game, {.check_alternation = false}); !problems.empty())
    throw std::invalid_argument("invalid game: " + problems.front());
  if (config.alpha <= 0 || config.alpha > 1)
    throw std::invalid_argument("learning rate must lie in (0, 1]");
  if (config.epsilon < 0 || config.epsilon > 1)
    throw std::invalid_argument("exploration rate must lie in [0, 1]");
  if (config.check_period == 0)
    throw std::invalid_argument("check period must be positive");

  QTable table = initial ? std::move(*initial) : init_q(game, config.variant);
  if (table.q.size() != game.edge_count())
    throw std::invalid_argument("Q table does not match the game");
  const PriorityScaling scaling = scale_priorities(game);
  TruenessCache cache;
  std::vector<double> rewards(game.edge_count());
  std::vector<char> known(game.edge_count(), 0);
  std::mt19937_64 rng(config.seed);
  // an arbitrary but fixed order among equally valued edges, so the
  // untrained table does not inherit the construction's successor order
  std::vector<std::uint32_t> tie_rank(game.edge_count());
  std::iota(tie_rank.begin(), tie_rank.end(), 0u);
  std::shuffle(tie_rank.begin(), tie_rank.end(), rng);
  QLResult result;

  auto check = [&] {
    ++result.checks;
    for (Player p : {Player::System, Player::Environment}) {
      Strategy s = greedy_strategy(game, table, p, tie_rank);
      if (check_winning(game, s, p)) {
        result.winner = p;
        result.strategy = std::move(s);
        return true;
      }
    }
    return false;
  };

  if (check()) {
    result.immediate = true;
    return result;
  }
  for (;;) {
    Episode ep = sample_episode(game, table, config.epsilon, rng);
    ++result.episodes;
    result.eval_steps += ep.vertices.size();

    unsigned top = 0;
    for (std::size_t i = ep.loop_start; i < ep.edges.size(); ++i)
      top = std::max(top, game.edge(ep.edges[i]).priority);
    const double verdict = priority_owner(top) == Player::System ? 1.0 : -1.0;

    const double a = config.alpha;
    for (std::size_t i = ep.edges.size(); i-- > 0;) {
      EdgeId e = ep.edges[i];
      if (table.pinned[e])
        continue;
      if (i + 1 == ep.edges.size()) {
        table.q[e] = q_update(table.q[e], a, verdict, 0.0);
        continue;
      }
      if (!known[e]) {
        rewards[e] = reward(game, e, config.variant, scaling, cache, config.progress_weight);
        known[e] = 1;
      }
      table.q[e] = q_update(table.q[e], a, rewards[e], vertex_value(game, table, game.edge(e).dst));
    }

    if (result.episodes % config.check_period == 0 && check())
      return result;
    bool late = config.deadline && std::chrono::steady_clock::now() > *config.deadline;
    if (result.eval_steps >= config.budget || late) {
      result.timeout = true;
      return result;
    }
  }
}

}  // namespace semgame
