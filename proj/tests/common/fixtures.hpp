#pragma once

#include <string>

#include "semgame/game.hpp"

namespace fixture {

inline semgame::Game sample() { return semgame::load_game(std::string(SEMGAME_FIXTURES) + "/sample.json"); }

// Edge id of src -> dst in the sample fixture.
inline semgame::EdgeId edge(const semgame::Game& g, semgame::VertexId src, semgame::VertexId dst) {
  for (semgame::EdgeId e : g.out_edges(src))
    if (g.edge(e).dst == dst)
      return e;
  return semgame::kNoEdge;
}

// The system strategy {v0 -> v2, v2 -> v3, v4 -> v4}.
inline semgame::Strategy sample_sigma0(const semgame::Game& g) {
  auto s = semgame::Strategy::empty_for(g, semgame::Player::System);
  s.choice[0] = edge(g, 0, 2);
  s.choice[2] = edge(g, 2, 3);
  s.choice[4] = edge(g, 4, 4);
  return s;
}

// The environment strategy {v1 -> v2, v3 -> v3}.
inline semgame::Strategy sample_sigma1(const semgame::Game& g) {
  auto s = semgame::Strategy::empty_for(g, semgame::Player::Environment);
  s.choice[1] = edge(g, 1, 2);
  s.choice[3] = edge(g, 3, 3);
  return s;
}

}  // namespace fixture
