#pragma once

// Independent reference implementations used to check the library.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "semgame/game.hpp"
#include "semgame/ltl.hpp"

namespace oracle {

using semgame::Formula;
using semgame::Letter;
using semgame::Op;

// Truth of the propositional abstraction under `value` (keyed by node).
inline bool eval_abstract(Formula f, const std::map<std::uint32_t, bool>& value) {
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !eval_abstract(f.child(), value);
    case Op::And:
      for (Formula c : f.children())
        if (!eval_abstract(c, value))
          return false;
      return true;
    case Op::Or:
      for (Formula c : f.children())
        if (eval_abstract(c, value))
          return true;
      return false;
    default: return value.at(f.id());
  }
}

inline void abstract_vars(Formula f, std::set<std::uint32_t>& ids, std::vector<Formula>& out) {
  switch (f.op()) {
    case Op::True:
    case Op::False: return;
    case Op::Not:
    case Op::And:
    case Op::Or:
      for (Formula c : f.children())
        abstract_vars(c, ids, out);
      return;
    default:
      if (ids.insert(f.id()).second)
        out.push_back(f);
  }
}

// Exact trueness by enumerating every assignment: (satisfying, total).
inline std::pair<std::uint64_t, std::uint64_t> brute_trueness(Formula f) {
  std::set<std::uint32_t> ids;
  std::vector<Formula> vars;
  abstract_vars(f, ids, vars);
  std::uint64_t sat = 0, total = std::uint64_t{1} << vars.size();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    std::map<std::uint32_t, bool> value;
    for (std::size_t i = 0; i < vars.size(); ++i)
      value[vars[i].id()] = (bits >> i) & 1;
    sat += eval_abstract(f, value) ? 1 : 0;
  }
  return {sat, total};
}

// Direct LTL semantics on prefix.loop^omega by bounded forward scans: from
// any position, the next |prefix|+|loop| positions cover every distinct one.
class NaiveLasso {
 public:
  NaiveLasso(std::vector<Letter> prefix, std::vector<Letter> loop)
      : prefix_(std::move(prefix)), loop_(std::move(loop)) {}

  bool holds(Formula f, std::size_t i = 0) const {
    const std::size_t horizon = prefix_.size() + loop_.size() + 1;
    switch (f.op()) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Atom: return letter(i).count(f.name()) > 0;
      case Op::Not: return !holds(f.child(), i);
      case Op::And:
        for (Formula c : f.children())
          if (!holds(c, i))
            return false;
        return true;
      case Op::Or:
        for (Formula c : f.children())
          if (holds(c, i))
            return true;
        return false;
      case Op::Next: return holds(f.child(), i + 1);
      case Op::Finally:
        for (std::size_t k = i; k < i + horizon; ++k)
          if (holds(f.child(), k))
            return true;
        return false;
      case Op::Globally:
        for (std::size_t k = i; k < i + horizon; ++k)
          if (!holds(f.child(), k))
            return false;
        return true;
      case Op::Until:
        for (std::size_t k = i; k < i + horizon; ++k) {
          if (holds(f.child(1), k))
            return true;
          if (!holds(f.child(0), k))
            return false;
        }
        return false;
      case Op::Release:
        for (std::size_t k = i; k < i + horizon; ++k) {
          if (!holds(f.child(1), k))
            return false;
          if (holds(f.child(0), k))
            return true;
        }
        return true;
    }
    return false;
  }

 private:
  const Letter& letter(std::size_t i) const {
    if (i < prefix_.size())
      return prefix_[i];
    return loop_[(i - prefix_.size()) % loop_.size()];
  }
  std::vector<Letter> prefix_, loop_;
};

// Random formula over `aps` with about `size` nodes, all operators allowed.
inline Formula random_ltl(std::mt19937_64& rng, const std::vector<std::string>& aps, unsigned size) {
  if (size <= 1) {
    std::uniform_int_distribution<std::size_t> pick(0, aps.size() + 1);
    std::size_t k = pick(rng);
    if (k == aps.size())
      return Formula::tt();
    if (k == aps.size() + 1)
      return Formula::ff();
    return Formula::atom(aps[k]);
  }
  int op = std::uniform_int_distribution<int>(0, size >= 3 ? 8 : 4)(rng);
  if (op <= 4) {
    Formula c = random_ltl(rng, aps, size - 1);
    switch (op) {
      case 0: return semgame::make_not(c);
      case 1: return semgame::make_next(c);
      case 2: return semgame::make_finally(c);
      case 3: return semgame::make_globally(c);
      default: return semgame::make_not(c);
    }
  }
  unsigned left = std::uniform_int_distribution<unsigned>(1, size - 2)(rng);
  Formula a = random_ltl(rng, aps, left), b = random_ltl(rng, aps, size - 1 - left);
  switch (op) {
    case 5: return semgame::make_and(a, b);
    case 6: return semgame::make_or(a, b);
    case 7: return semgame::make_until(a, b);
    default: return semgame::make_release(a, b);
  }
}

inline Letter random_letter(std::mt19937_64& rng, const std::vector<std::string>& aps) {
  Letter l;
  for (const auto& a : aps)
    if (std::bernoulli_distribution(0.5)(rng))
      l.insert(a);
  return l;
}

// Alternating random game; every vertex has 1..3 successors of the other
// player. When `aps` is nonempty each vertex gets a random master formula.
inline semgame::Game random_game(std::mt19937_64& rng, unsigned n, unsigned max_priority,
                                 const std::vector<std::string>& aps = {}) {
  using namespace semgame;
  n = std::max(2u, n);
  Game g;
  for (unsigned v = 0; v < n; ++v) {
    std::optional<Labelling> label;
    if (!aps.empty())
      label = Labelling{random_ltl(rng, aps, std::uniform_int_distribution<unsigned>(1, 6)(rng)), {}};
    g.add_vertex(v % 2 == 0 ? Player::System : Player::Environment, label);
  }
  std::uniform_int_distribution<unsigned> prio(0, max_priority);
  for (unsigned v = 0; v < n; ++v) {
    std::vector<unsigned> others;
    for (unsigned u = (v + 1) % 2; u < n; u += 2)
      others.push_back(u);
    std::shuffle(others.begin(), others.end(), rng);
    unsigned k = std::uniform_int_distribution<unsigned>(1, std::min<unsigned>(3, others.size()))(rng);
    for (unsigned i = 0; i < k; ++i)
      g.add_edge(v, others[i], prio(rng));
  }
  g.set_start(0);
  return g;
}

// Winner from the start by exhaustive search over both players' positional
// strategies and direct evaluation of the induced lasso. Tiny games only.
inline semgame::Player brute_winner(const semgame::Game& g) {
  using namespace semgame;
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> sys, env;
  for (VertexId v = 0; v < n; ++v)
    (g.owner(v) == Player::System ? sys : env).push_back(v);
  auto count = [&](const std::vector<std::size_t>& vs) {
    std::uint64_t c = 1;
    for (auto v : vs)
      c *= g.out_edges(static_cast<VertexId>(v)).size();
    return c;
  };
  auto decode = [&](const std::vector<std::size_t>& vs, std::uint64_t code, std::vector<EdgeId>& choice) {
    for (auto v : vs) {
      auto out = g.out_edges(static_cast<VertexId>(v));
      choice[v] = out[code % out.size()];
      code /= out.size();
    }
  };
  std::vector<EdgeId> choice(n, kNoEdge);
  for (std::uint64_t s = 0; s < count(sys); ++s) {
    decode(sys, s, choice);
    bool all = true;
    for (std::uint64_t e = 0; e < count(env) && all; ++e) {
      decode(env, e, choice);
      std::vector<int> seen(n, -1);
      std::vector<EdgeId> path;
      VertexId v = g.start();
      while (seen[v] < 0) {
        seen[v] = static_cast<int>(path.size());
        path.push_back(choice[v]);
        v = g.edge(choice[v]).dst;
      }
      unsigned top = 0;
      for (std::size_t i = seen[v]; i < path.size(); ++i)
        top = std::max(top, g.edge(path[i]).priority);
      all = top % 2 == 1;
    }
    if (all)
      return Player::System;
  }
  return Player::Environment;
}

}  // namespace oracle
