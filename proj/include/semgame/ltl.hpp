#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semgame/bdd.hpp"

namespace semgame {

enum class Op : std::uint8_t {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Next,
  Until,
  Release,
  Finally,
  Globally,
};

namespace detail {
struct FormulaNode;
}

/// Handle to a hash-consed LTL formula.
///
/// Structurally equal formulae share one node, so equality and hashing are
/// pointer operations. Nodes live for the lifetime of the process. `And`/`Or`
/// are n-ary with flattened, deduplicated, structurally sorted children.
class Formula {
 public:
  Formula();  // tt

  static Formula tt();
  static Formula ff();
  static Formula atom(std::string_view name);

  Op op() const;
  const std::string& name() const;
  std::span<const Formula> children() const;
  Formula child(std::size_t i = 0) const { return children()[i]; }
  /// Creation index in the formula store; a total order that is stable within
  /// one process run.
  std::uint32_t id() const;
  /// Number of syntax-tree nodes.
  std::size_t size() const;

  bool is_true() const { return op() == Op::True; }
  bool is_false() const { return op() == Op::False; }
  bool is_constant() const { return is_true() || is_false(); }
  bool is_temporal() const;

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
  std::size_t hash() const { return reinterpret_cast<std::uintptr_t>(node_) >> 4; }

 private:
  friend struct detail::FormulaNode;
  explicit Formula(const detail::FormulaNode* n) : node_(n) {}
  const detail::FormulaNode* node_;
};

struct FormulaHash {
  std::size_t operator()(Formula f) const noexcept { return f.hash(); }
};

/// Total order on formulae that depends only on their structure (not on
/// creation order), so it is reproducible across runs and threads.
int structural_compare(Formula a, Formula b);

struct StructuralLess {
  bool operator()(Formula a, Formula b) const { return structural_compare(a, b) < 0; }
};

using FormulaSet = std::set<Formula, StructuralLess>;

/// Set of atomic propositions that hold in one step.
using Letter = std::set<std::string>;

// Smart constructors. They perform only local, syntactic simplification.
Formula make_not(Formula f);
Formula make_and(std::vector<Formula> fs);
Formula make_or(std::vector<Formula> fs);
Formula make_and(Formula a, Formula b);
Formula make_or(Formula a, Formula b);
Formula make_next(Formula f);
Formula make_finally(Formula f);
Formula make_globally(Formula f);
Formula make_until(Formula a, Formula b);
Formula make_release(Formula a, Formula b);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the textual grammar
///   f ::= tt | ff | atom | ! f | X f | F f | G f | f U f | f R f
///       | f & f | f | f | f -> f | f <-> f | ( f )
/// with precedence unary > U,R (right-assoc) > & > | > -> (right-assoc) > <->.
/// Implication and equivalence are expanded into the core connectives.
Formula parse(std::string_view text);
std::string to_string(Formula f);
std::ostream& operator<<(std::ostream& os, Formula f);

Formula nnf(Formula f);
bool is_nnf(Formula f);

FormulaSet subformulas(Formula f);
/// Outermost temporal nodes (X, F, G, U, R) not nested inside another
/// temporal operator.
FormulaSet top_operators(Formula f);
std::set<std::string> atoms(Formula f);

/// Atoms and temporal nodes occurring outside of any temporal operator: the
/// variables of the propositional abstraction of `f`.
std::vector<Formula> propositional_variables(Formula f);

/// Encodes the propositional abstraction of `f`; every variable returned by
/// propositional_variables(f) must be present in `index`.
BddManager::Node to_bdd(BddManager& mgr, Formula f, const std::map<Formula, unsigned, StructuralLess>& index);

/// Canonical propositional normal form: formulae equivalent under the
/// propositional abstraction map to the identical node.
Formula simplify(Formula f);
bool propositionally_equivalent(Formula a, Formula b);

/// One-step expansion of every top-level temporal operator, then simplified.
/// Nodes in `opaque` are left untouched.
Formula unfold(Formula f);
Formula unfold(Formula f, const FormulaSet& opaque);

/// Replaces top-level atoms for which `value` yields a truth value. Does not
/// descend into temporal operators and does not simplify.
Formula substitute(Formula f, const std::function<std::optional<bool>(const std::string&)>& value);

/// Replaces top-level `X g` by `g`. Does not simplify.
Formula strip_next(Formula f);

/// Residual obligation after reading `nu`: w |= after(f, nu) iff nu.w |= f.
Formula after(Formula f, const Letter& nu);
Formula after(Formula f, const Letter& nu, const FormulaSet& opaque);

/// Exact satisfaction of the ultimately periodic word prefix.loop^omega.
bool eval_lasso(Formula f, std::span<const Letter> prefix, std::span<const Letter> loop);

}  // namespace semgame

template <>
struct std::hash<semgame::Formula> {
  std::size_t operator()(semgame::Formula f) const noexcept { return f.hash(); }
};
