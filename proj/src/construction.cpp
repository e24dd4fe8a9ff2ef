#include "semgame/construction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>

namespace semgame {

const char* to_string(FormulaClass c) {
  switch (c) {
    case FormulaClass::Safety: return "safety";
    case FormulaClass::Cosafety: return "cosafety";
    case FormulaClass::General: return "general";
  }
  return "?";
}

namespace {

bool contains_op(Formula f, Op a, Op b) {
  if (f.op() == a || f.op() == b)
    return true;
  for (Formula c : f.children())
    if (contains_op(c, a, b))
      return true;
  return false;
}

bool is_goal(Formula g) {
  return g.op() == Op::Globally && !contains_op(nnf(g.child()), Op::Globally, Op::Release);
}

// Top-level replacement of whole nodes; does not enter temporal operators.
Formula replace_nodes(Formula f, const std::map<Formula, Formula, StructuralLess>& repl) {
  if (auto it = repl.find(f); it != repl.end())
    return it->second;
  if (f.op() == Op::And || f.op() == Op::Or || f.op() == Op::Not) {
    std::vector<Formula> kids;
    for (Formula c : f.children())
      kids.push_back(replace_nodes(c, repl));
    if (f.op() == Op::Not)
      return make_not(kids.front());
    return f.op() == Op::And ? make_and(std::move(kids)) : make_or(std::move(kids));
  }
  return f;
}

}  // namespace

FormulaClass classify(Formula phi) {
  Formula f = nnf(phi);
  if (!contains_op(f, Op::Finally, Op::Until))
    return FormulaClass::Safety;
  if (!contains_op(f, Op::Globally, Op::Release))
    return FormulaClass::Cosafety;
  return FormulaClass::General;
}

MonitorState monitor_start(Formula goal) {
  if (!is_goal(goal))
    throw BuildError("monitor goal must be G of a cosafety formula: " + to_string(goal));
  Formula body = goal.child();
  if (body.op() == Op::Finally)
    return {goal, {body.child()}, MonitorEvent::Neutral};
  return {goal, {body, Formula::tt()}, MonitorEvent::Neutral};
}

MonitorState monitor_step(const MonitorState& state, const Letter& nu) {
  if (state.dead())
    return {state.goal, state.obligations, MonitorEvent::Neutral};
  Formula body = state.goal.child();

  if (body.op() == Op::Finally) {
    Formula chi = body.child();
    FormulaSet pending;
    pending.insert(after(chi, nu));
    for (Formula r : state.obligations)
      pending.insert(after(r, nu));
    if (pending.count(Formula::tt()))
      return {state.goal, {chi}, MonitorEvent::Success};
    pending.erase(Formula::ff());
    if (pending.empty())
      return {state.goal, {chi}, MonitorEvent::Neutral};
    return {state.goal, {pending.begin(), pending.end()}, MonitorEvent::Neutral};
  }

  Formula current = after(state.obligations.at(0), nu);
  Formula next = after(make_and(state.obligations.at(1), body), nu);
  if (current.is_false() || next.is_false())
    return {state.goal, {Formula::ff()}, MonitorEvent::Fail};
  if (current.is_true())
    return {state.goal, {next, Formula::tt()}, MonitorEvent::Success};
  return {state.goal, {current, next}, MonitorEvent::Neutral};
}

std::pair<unsigned, AppearanceRecord> transition_priority(const AppearanceRecord& record,
                                                          const std::vector<MonitorEvent>& events) {
  auto event_of = [&](int id) {
    return id >= 0 && static_cast<std::size_t>(id) < events.size() ? events[id] : MonitorEvent::Neutral;
  };
  std::optional<std::size_t> top;
  for (std::size_t i = 0; i < record.order.size(); ++i)
    if (event_of(record.order[i]) != MonitorEvent::Neutral)
      top = i;
  if (!top)
    return {0, record};
  const auto i = static_cast<unsigned>(*top);
  if (event_of(record.order[i]) == MonitorEvent::Success)
    return {2 * i + 3, record};

  AppearanceRecord next;
  for (int id : record.order)
    if (event_of(id) == MonitorEvent::Fail)
      next.order.push_back(id);
  for (int id : record.order)
    if (event_of(id) != MonitorEvent::Fail)
      next.order.push_back(id);
  return {2 * i + 2, next};
}

std::vector<Move> enumerate_moves(const std::vector<std::string>& aps) {
  if (aps.size() > 20)
    throw BuildError("too many propositions for one player");
  std::vector<Move> out;
  for (std::uint32_t bits = 0; bits < (1u << aps.size()); ++bits) {
    Move m;
    for (std::size_t j = 0; j < aps.size(); ++j)
      m[aps[j]] = (bits >> j) & 1u;
    out.push_back(std::move(m));
  }
  return out;
}

Letter letter_of(const Move& a, const Move& b) {
  Letter nu;
  for (const auto* m : {&a, &b})
    for (const auto& [ap, value] : *m)
      if (value)
        nu.insert(ap);
  return nu;
}

namespace {

using Key = std::vector<std::uint32_t>;

Key label_key(const Labelling& l) {
  Key k{l.master.id()};
  for (const Monitor& m : l.monitors) {
    k.push_back(static_cast<std::uint32_t>(m.id));
    k.push_back(static_cast<std::uint32_t>(m.obligations.size()));
    for (Formula f : m.obligations)
      k.push_back(f.id());
  }
  return k;
}

class Builder {
 public:
  Builder(Formula phi, const BuildOptions& options) : opts_(options) {
    check_partition(phi);
    Formula f = nnf(phi);
    cls_ = classify(f);
    Labelling start;
    if (cls_ == FormulaClass::General) {
      start = split_monitors(f);
    } else {
      start.master = simplify(f);
      neutral_ = cls_ == FormulaClass::Safety ? 1 : 0;
    }

    const bool env_first = opts_.order == MoveOrder::EnvFirst;
    first_ = env_first ? Player::Environment : Player::System;
    first_moves_ = enumerate_moves(env_first ? opts_.inputs : opts_.outputs);
    second_moves_ = enumerate_moves(env_first ? opts_.outputs : opts_.inputs);
    game_.set_inputs(opts_.inputs);
    game_.set_outputs(opts_.outputs);
    game_.set_start(target(start));
  }

  Game run() {
    while (!queue_.empty()) {
      VertexId v = queue_.front();
      queue_.pop_front();
      expand(v);
    }
    close_sinks();
    return std::move(game_);
  }

 private:
  void check_partition(Formula phi) {
    std::set<std::string> in(opts_.inputs.begin(), opts_.inputs.end());
    std::set<std::string> out(opts_.outputs.begin(), opts_.outputs.end());
    if (in.size() != opts_.inputs.size() || out.size() != opts_.outputs.size())
      throw BuildError("duplicate proposition in the partition");
    for (const auto& a : in)
      if (out.count(a))
        throw BuildError("proposition '" + a + "' is both input and output");
    for (const auto& a : atoms(phi))
      if (!in.count(a) && !out.count(a))
        throw BuildError("proposition '" + a + "' is neither input nor output");
  }

  // phi = S & (G psi_1 | ... | G psi_k) with S safety and every psi_i cosafety.
  Labelling split_monitors(Formula f) {
    std::vector<Formula> conjuncts;
    if (f.op() == Op::And)
      conjuncts.assign(f.children().begin(), f.children().end());
    else
      conjuncts.push_back(f);

    std::vector<Formula> safe, rest;
    for (Formula c : conjuncts)
      (classify(c) == FormulaClass::Safety ? safe : rest).push_back(c);

    const auto reject = [&] {
      throw BuildError("formula is outside the supported monitor fragment (safety part conjoined with a "
                       "disjunction of G over cosafety bodies); supply the game in the import format: " +
                       to_string(f));
    };
    if (std::all_of(rest.begin(), rest.end(), is_goal)) {
      // G a & G b == G (a & b)
      if (rest.size() == 1) {
        goals_.push_back(rest.front());
      } else {
        std::vector<Formula> bodies;
        for (Formula g : rest)
          bodies.push_back(g.child());
        goals_.push_back(make_globally(make_and(std::move(bodies))));
      }
    } else if (rest.size() == 1 && rest.front().op() == Op::Or) {
      for (Formula g : rest.front().children()) {
        if (!is_goal(g))
          reject();
        goals_.push_back(g);
      }
    } else {
      reject();
    }
    std::sort(goals_.begin(), goals_.end(), StructuralLess{});
    opaque_.insert(goals_.begin(), goals_.end());

    safe.push_back(make_or(goals_));
    Labelling l;
    l.master = simplify(make_and(std::move(safe)));
    for (std::size_t i = 0; i < goals_.size(); ++i) {
      MonitorState s = monitor_start(goals_[i]);
      l.monitors.push_back({static_cast<int>(i), s.obligations});
    }
    return l;
  }

  VertexId new_vertex(Player owner, Labelling label) {
    if (game_.vertex_count() >= opts_.max_vertices)
      throw BudgetError("vertex budget of " + std::to_string(opts_.max_vertices) + " exceeded");
    return game_.add_vertex(owner, std::move(label));
  }

  VertexId sink(bool win) {
    auto& slot = win ? tt_sink_ : ff_sink_;
    // owned like full-letter vertices so that every edge into a sink alternates
    if (!slot)
      slot = new_vertex(first_, Labelling{win ? Formula::tt() : Formula::ff(), {}});
    return *slot;
  }

  // Full-letter vertex for `l`, or a sink when the master is decided.
  VertexId target(const Labelling& l) {
    if (l.master.is_constant())
      return sink(l.master.is_true());
    Key k = label_key(l);
    if (auto it = full_.find(k); it != full_.end())
      return it->second;
    VertexId v = new_vertex(first_, l);
    full_.emplace(std::move(k), v);
    queue_.push_back(v);
    return v;
  }

  std::pair<Labelling, unsigned> step(const Labelling& l, const Letter& nu) const {
    Labelling next;
    if (cls_ != FormulaClass::General) {
      next.master = after(l.master, nu);
      return {next, neutral_};
    }
    std::vector<MonitorEvent> events(goals_.size(), MonitorEvent::Neutral);
    std::vector<std::vector<Formula>> obligations(goals_.size());
    AppearanceRecord record;
    std::map<Formula, Formula, StructuralLess> dead;
    for (const Monitor& m : l.monitors) {
      MonitorState s = monitor_step({goals_[m.id], m.obligations, MonitorEvent::Neutral}, nu);
      events[m.id] = s.event;
      if (s.dead())
        dead.emplace(goals_[m.id], Formula::ff());
      obligations[m.id] = std::move(s.obligations);
      record.order.push_back(m.id);
    }
    auto [priority, order] = transition_priority(record, events);
    next.master = simplify(replace_nodes(after(l.master, nu, opaque_), dead));
    for (int id : order.order)
      next.monitors.push_back({id, std::move(obligations[id])});
    return {next, priority};
  }

  void expand(VertexId v) {
    const Labelling label = *game_.vertex(v).label;
    const Formula unfolded = unfold(label.master, opaque_);
    for (std::size_t i = 0; i < first_moves_.size(); ++i) {
      const Move& m1 = first_moves_[i];
      Labelling half = label;
      half.master = simplify(substitute(unfolded, [&](const std::string& ap) -> std::optional<bool> {
        auto it = m1.find(ap);
        return it == m1.end() ? std::nullopt : std::optional<bool>(it->second);
      }));
      // (label, first move) is unique per expansion, so no lookup is needed
      VertexId mid = new_vertex(opponent(first_), std::move(half));
      game_.add_edge(v, mid, 0, m1);

      std::set<std::pair<VertexId, unsigned>> seen;
      for (const Move& m2 : second_moves_) {
        auto [next, priority] = step(label, letter_of(m1, m2));
        VertexId dst = target(next);
        if (seen.insert({dst, priority}).second)
          game_.add_edge(mid, dst, priority, m2);
      }
    }
  }

  void close_sinks() {
    unsigned top = 0;
    for (const Edge& e : game_.edges())
      top = std::max(top, e.priority);
    if (tt_sink_)
      game_.add_edge(*tt_sink_, *tt_sink_, top % 2 == 1 ? top : top + 1);
    if (ff_sink_)
      game_.add_edge(*ff_sink_, *ff_sink_, top % 2 == 0 ? top : top + 1);
  }

  BuildOptions opts_;
  FormulaClass cls_ = FormulaClass::General;
  unsigned neutral_ = 0;
  std::vector<Formula> goals_;
  FormulaSet opaque_;
  Player first_ = Player::Environment;
  std::vector<Move> first_moves_, second_moves_;
  Game game_;
  std::map<Key, VertexId> full_;
  std::deque<VertexId> queue_;
  std::optional<VertexId> tt_sink_, ff_sink_;
};

}  // namespace

Game build_game(Formula phi, const BuildOptions& options) { return Builder(phi, options).run(); }

}  // namespace semgame
