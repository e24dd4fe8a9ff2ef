#pragma once

#include <unordered_map>

#include "semgame/game.hpp"
#include "semgame/trueness.hpp"

namespace semgame {

/// Memoized trueness of formulae appearing in one game's labelling.
class TruenessCache {
 public:
  const TruenessValue& of(Formula f);
  double value(Formula f) { return of(f).to_double(); }
  /// Trueness of the master formula at `v`; the game must be labelled.
  const TruenessValue& master(const Game& game, VertexId v);

 private:
  std::unordered_map<Formula, TruenessValue> memo_;
};

/// Position of the monitor that produced `priority`, or -1 for neutral and
/// master-only priorities.
int event_position(unsigned priority);

/// Largest increase, over monitors ranked above the event position of `e`,
/// of the minimal obligation trueness between the source and the target
/// labelling. Monitors are matched by id; no eligible monitor gives 0.
double progress(const Game& game, EdgeId e, TruenessCache& cache);

}  // namespace semgame
