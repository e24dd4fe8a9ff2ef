#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semgame/game.hpp"
#include "semgame/ltl.hpp"

namespace semgame {

enum class FormulaClass { Safety, Cosafety, General };
const char* to_string(FormulaClass c);

/// Syntactic fragment of an NNF formula: safety has no F/U, cosafety no G/R.
/// Formulae in both fragments report Safety.
FormulaClass classify(Formula phi);

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the vertex budget is exhausted; a BuildError.
class BudgetError : public BuildError {
 public:
  using BuildError::BuildError;
};

enum class MoveOrder { EnvFirst, SysFirst };

struct BuildOptions {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  MoveOrder order = MoveOrder::EnvFirst;
  std::size_t max_vertices = 10000;
};

enum class MonitorEvent { Neutral, Success, Fail };

/// One monitor of a goal G psi.
///
/// When psi = F chi the obligations are the pending residuals of chi
/// instances, and the monitor succeeds whenever one completes. Otherwise the
/// obligations are two batches {current, next} of conjoined psi instances;
/// success is emitted when the current batch is discharged. A violated
/// instance kills the monitor: its obligations become {ff} for good.
struct MonitorState {
  Formula goal;
  std::vector<Formula> obligations;
  MonitorEvent event = MonitorEvent::Neutral;

  bool dead() const { return obligations.size() == 1 && obligations.front().is_false(); }
};

/// `goal` must be G psi with psi cosafety.
MonitorState monitor_start(Formula goal);
MonitorState monitor_step(const MonitorState& state, const Letter& nu);

/// Monitor ids from front (position 0) to back.
struct AppearanceRecord {
  std::vector<int> order;
  friend bool operator==(const AppearanceRecord&, const AppearanceRecord&) = default;
};

/// `events[id]` is the event of the monitor with that id.
std::pair<unsigned, AppearanceRecord> transition_priority(const AppearanceRecord& record,
                                                          const std::vector<MonitorEvent>& events);

/// Labelled alternating parity game for `phi` over the given partition.
Game build_game(Formula phi, const BuildOptions& options);

/// Moves of one player in enumeration order: bit j of the index sets aps[j].
std::vector<Move> enumerate_moves(const std::vector<std::string>& aps);
Letter letter_of(const Move& a, const Move& b);

}  // namespace semgame
