#include "semgame/semantics.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>

namespace semgame {

const TruenessValue& TruenessCache::of(Formula f) {
  auto it = memo_.find(f);
  if (it == memo_.end())
    it = memo_.emplace(f, trueness(f)).first;
  return it->second;
}

const TruenessValue& TruenessCache::master(const Game& game, VertexId v) {
  const auto& label = game.vertex(v).label;
  if (!label)
    throw std::invalid_argument("vertex " + std::to_string(v) + " has no labelling");
  return of(label->master);
}

int event_position(unsigned priority) { return priority >= 2 ? static_cast<int>((priority - 2) / 2) : -1; }

namespace {

double min_trueness(const Monitor& m, TruenessCache& cache) {
  double lo = 1.0;
  for (Formula f : m.obligations)
    lo = std::min(lo, cache.value(f));
  return lo;
}

}  // namespace

double progress(const Game& game, EdgeId e, TruenessCache& cache) {
  const Edge& edge = game.edge(e);
  const auto& src = game.vertex(edge.src).label;
  const auto& dst = game.vertex(edge.dst).label;
  if (!src || !dst)
    return 0.0;
  std::optional<double> best;
  const int from = event_position(edge.priority);
  for (std::size_t i = 0; i < src->monitors.size(); ++i) {
    if (static_cast<int>(i) <= from)
      continue;
    const Monitor& m = src->monitors[i];
    auto it = std::find_if(dst->monitors.begin(), dst->monitors.end(),
                           [&](const Monitor& n) { return n.id == m.id; });
    if (it == dst->monitors.end())
      continue;
    double delta = min_trueness(*it, cache) - min_trueness(m, cache);
    best = best ? std::max(*best, delta) : delta;
  }
  return best.value_or(0.0);
}

}  // namespace semgame
