#include "semgame/ltl.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace semgame {

namespace detail {

struct FormulaNode {
  Op op;
  std::string name;
  std::vector<Formula> children;
  std::uint32_t id;
  std::size_t size;

  static Formula wrap(const FormulaNode* n) { return Formula(n); }
  static const FormulaNode* raw(Formula f) { return f.node_; }
};

}  // namespace detail

namespace {

using detail::FormulaNode;

struct NodeKey {
  Op op;
  std::string name;
  std::vector<const FormulaNode*> kids;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const noexcept {
    std::size_t h = std::hash<std::string>{}(k.name) ^ (static_cast<std::size_t>(k.op) * 0x9e3779b97f4a7c15ULL);
    for (auto* p : k.kids)
      h = (h ^ reinterpret_cast<std::uintptr_t>(p)) * 0x100000001b3ULL;
    return h;
  }
};

class Store {
 public:
  const FormulaNode* intern(Op op, std::string name, std::vector<Formula> children) {
    NodeKey key{op, name, {}};
    key.kids.reserve(children.size());
    std::size_t size = 1;
    for (Formula c : children) {
      key.kids.push_back(FormulaNode::raw(c));
      size += c.size();
    }
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(key); it != index_.end())
      return it->second;
    auto id = static_cast<std::uint32_t>(nodes_.size());
    const FormulaNode* n = &nodes_.emplace_back(FormulaNode{op, std::move(name), std::move(children), id, size});
    index_.emplace(std::move(key), n);
    return n;
  }

 private:
  std::mutex mutex_;
  std::deque<FormulaNode> nodes_;
  std::unordered_map<NodeKey, const FormulaNode*, NodeKeyHash> index_;
};

Store& store() {
  static Store* s = new Store;  // intentionally leaked: formulae are immortal
  return *s;
}

Formula node(Op op, std::vector<Formula> children = {}, std::string name = {}) {
  return FormulaNode::wrap(store().intern(op, std::move(name), std::move(children)));
}

bool is_temporal_op(Op op) {
  switch (op) {
    case Op::Next:
    case Op::Until:
    case Op::Release:
    case Op::Finally:
    case Op::Globally:
      return true;
    default:
      return false;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Formula

Formula::Formula() : Formula(tt()) {}

Formula Formula::tt() {
  static const Formula t = node(Op::True);
  return t;
}

Formula Formula::ff() {
  static const Formula f = node(Op::False);
  return f;
}

Formula Formula::atom(std::string_view name) {
  if (name == "tt")
    return tt();
  if (name == "ff")
    return ff();
  return node(Op::Atom, {}, std::string(name));
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
std::span<const Formula> Formula::children() const { return node_->children; }
std::uint32_t Formula::id() const { return node_->id; }
std::size_t Formula::size() const { return node_->size; }
bool Formula::is_temporal() const { return is_temporal_op(op()); }

int structural_compare(Formula a, Formula b) {
  if (a == b)
    return 0;
  if (a.op() != b.op())
    return a.op() < b.op() ? -1 : 1;
  if (a.op() == Op::Atom)
    return a.name() < b.name() ? -1 : (a.name() == b.name() ? 0 : 1);
  auto ca = a.children(), cb = b.children();
  if (ca.size() != cb.size())
    return ca.size() < cb.size() ? -1 : 1;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (int c = structural_compare(ca[i], cb[i]); c != 0)
      return c;
  return 0;
}

// ---------------------------------------------------------------------------
// Smart constructors

Formula make_not(Formula f) {
  switch (f.op()) {
    case Op::True:
      return Formula::ff();
    case Op::False:
      return Formula::tt();
    case Op::Not:
      return f.child();
    default:
      return node(Op::Not, {f});
  }
}

namespace {

Formula make_junction(Op op, std::vector<Formula> fs) {
  const Op absorbing = op == Op::And ? Op::False : Op::True;
  const Op neutral = op == Op::And ? Op::True : Op::False;
  std::vector<Formula> flat;
  flat.reserve(fs.size());
  for (Formula f : fs) {
    if (f.op() == absorbing)
      return f;
    if (f.op() == neutral)
      continue;
    if (f.op() == op)
      flat.insert(flat.end(), f.children().begin(), f.children().end());
    else
      flat.push_back(f);
  }
  std::sort(flat.begin(), flat.end(), StructuralLess{});
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  for (Formula f : flat)
    if (f.op() == Op::Not && std::binary_search(flat.begin(), flat.end(), f.child(), StructuralLess{}))
      return op == Op::And ? Formula::ff() : Formula::tt();
  if (flat.empty())
    return op == Op::And ? Formula::tt() : Formula::ff();
  if (flat.size() == 1)
    return flat.front();
  return node(op, std::move(flat));
}

}  // namespace

Formula make_and(std::vector<Formula> fs) { return make_junction(Op::And, std::move(fs)); }
Formula make_or(std::vector<Formula> fs) { return make_junction(Op::Or, std::move(fs)); }
Formula make_and(Formula a, Formula b) { return make_and(std::vector<Formula>{a, b}); }
Formula make_or(Formula a, Formula b) { return make_or(std::vector<Formula>{a, b}); }

Formula make_next(Formula f) {
  if (f.is_constant())
    return f;
  return node(Op::Next, {f});
}

Formula make_finally(Formula f) {
  if (f.is_constant() || f.op() == Op::Finally)
    return f;
  return node(Op::Finally, {f});
}

Formula make_globally(Formula f) {
  if (f.is_constant() || f.op() == Op::Globally)
    return f;
  return node(Op::Globally, {f});
}

Formula make_until(Formula a, Formula b) {
  if (b.is_constant() || a.is_false() || a == b)
    return b;
  if (a.is_true())
    return make_finally(b);
  return node(Op::Until, {a, b});
}

Formula make_release(Formula a, Formula b) {
  if (b.is_constant() || a.is_true() || a == b)
    return b;
  if (a.is_false())
    return make_globally(b);
  return node(Op::Release, {a, b});
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Or:
      return 1;
    case Op::And:
      return 2;
    case Op::Until:
    case Op::Release:
      return 3;
    case Op::Not:
    case Op::Next:
    case Op::Finally:
    case Op::Globally:
      return 4;
    default:
      return 5;
  }
}

void print(std::ostream& os, Formula f, int needed) {
  const int prec = precedence(f.op());
  const bool parens = prec < needed;
  if (parens)
    os << '(';
  switch (f.op()) {
    case Op::True:
      os << "tt";
      break;
    case Op::False:
      os << "ff";
      break;
    case Op::Atom:
      os << f.name();
      break;
    case Op::Not:
      os << '!';
      print(os, f.child(), 4);
      break;
    case Op::Next:
    case Op::Finally:
    case Op::Globally:
      os << (f.op() == Op::Next ? "X " : f.op() == Op::Finally ? "F " : "G ");
      print(os, f.child(), 4);
      break;
    case Op::Until:
    case Op::Release:
      print(os, f.child(0), 4);
      os << (f.op() == Op::Until ? " U " : " R ");
      print(os, f.child(1), 3);
      break;
    case Op::And:
    case Op::Or: {
      const char* sep = f.op() == Op::And ? " & " : " | ";
      bool first = true;
      for (Formula c : f.children()) {
        if (!first)
          os << sep;
        first = false;
        print(os, c, prec + 1);
      }
      break;
    }
  }
  if (parens)
    os << ')';
}

}  // namespace

std::string to_string(Formula f) {
  std::ostringstream os;
  print(os, f, 0);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, Formula f) {
  print(os, f, 0);
  return os;
}

// ---------------------------------------------------------------------------
// Normal forms and structural queries

namespace {

Formula push_negation(Formula f, bool negate) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return negate ? make_not(f) : f;
    case Op::Not:
      return push_negation(f.child(), !negate);
    case Op::And:
    case Op::Or: {
      std::vector<Formula> kids;
      for (Formula c : f.children())
        kids.push_back(push_negation(c, negate));
      return (f.op() == Op::And) != negate ? make_and(std::move(kids)) : make_or(std::move(kids));
    }
    case Op::Next:
      return make_next(push_negation(f.child(), negate));
    case Op::Finally:
      return negate ? make_globally(push_negation(f.child(), true)) : make_finally(push_negation(f.child(), false));
    case Op::Globally:
      return negate ? make_finally(push_negation(f.child(), true)) : make_globally(push_negation(f.child(), false));
    case Op::Until: {
      Formula a = push_negation(f.child(0), negate), b = push_negation(f.child(1), negate);
      return negate ? make_release(a, b) : make_until(a, b);
    }
    case Op::Release: {
      Formula a = push_negation(f.child(0), negate), b = push_negation(f.child(1), negate);
      return negate ? make_until(a, b) : make_release(a, b);
    }
  }
  return f;
}

void collect_subformulas(Formula f, FormulaSet& out) {
  if (!out.insert(f).second)
    return;
  for (Formula c : f.children())
    collect_subformulas(c, out);
}

void collect_tops(Formula f, FormulaSet& out) {
  if (f.is_temporal()) {
    out.insert(f);
    return;
  }
  for (Formula c : f.children())
    collect_tops(c, out);
}

void collect_atoms(Formula f, std::set<std::string>& out) {
  if (f.op() == Op::Atom)
    out.insert(f.name());
  for (Formula c : f.children())
    collect_atoms(c, out);
}

void collect_prop_vars(Formula f, FormulaSet& out) {
  if (f.op() == Op::Atom || f.is_temporal()) {
    out.insert(f);
    return;
  }
  for (Formula c : f.children())
    collect_prop_vars(c, out);
}

}  // namespace

Formula nnf(Formula f) { return push_negation(f, false); }

bool is_nnf(Formula f) {
  if (f.op() == Op::Not)
    return f.child().op() == Op::Atom;
  for (Formula c : f.children())
    if (!is_nnf(c))
      return false;
  return true;
}

FormulaSet subformulas(Formula f) {
  FormulaSet out;
  collect_subformulas(f, out);
  return out;
}

FormulaSet top_operators(Formula f) {
  FormulaSet out;
  collect_tops(f, out);
  return out;
}

std::set<std::string> atoms(Formula f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

std::vector<Formula> propositional_variables(Formula f) {
  FormulaSet vars;
  collect_prop_vars(f, vars);
  return {vars.begin(), vars.end()};
}

// ---------------------------------------------------------------------------
// Propositional abstraction

BddManager::Node to_bdd(BddManager& mgr, Formula f, const std::map<Formula, unsigned, StructuralLess>& index) {
  switch (f.op()) {
    case Op::True:
      return BddManager::kTrue;
    case Op::False:
      return BddManager::kFalse;
    case Op::Not:
      return mgr.bdd_not(to_bdd(mgr, f.child(), index));
    case Op::And: {
      BddManager::Node r = BddManager::kTrue;
      for (Formula c : f.children())
        r = mgr.bdd_and(r, to_bdd(mgr, c, index));
      return r;
    }
    case Op::Or: {
      BddManager::Node r = BddManager::kFalse;
      for (Formula c : f.children())
        r = mgr.bdd_or(r, to_bdd(mgr, c, index));
      return r;
    }
    default:
      return mgr.var(index.at(f));
  }
}

namespace {

class CanonicalBuilder {
 public:
  CanonicalBuilder(BddManager& mgr, const std::vector<Formula>& vars) : mgr_(mgr), vars_(vars) {}

  Formula build(BddManager::Node n) {
    if (n == BddManager::kTrue)
      return Formula::tt();
    if (n == BddManager::kFalse)
      return Formula::ff();
    if (auto it = memo_.find(n); it != memo_.end())
      return it->second;
    Formula v = vars_[mgr_.level(n)];
    BddManager::Node lo = mgr_.low(n), hi = mgr_.high(n);
    Formula flo = build(lo), fhi = build(hi);
    Formula r;
    if (mgr_.implies(lo, hi))
      r = make_or(flo, make_and(v, fhi));
    else if (mgr_.implies(hi, lo))
      r = make_or(fhi, make_and(make_not(v), flo));
    else
      r = make_or(make_and(v, fhi), make_and(make_not(v), flo));
    memo_.emplace(n, r);
    return r;
  }

 private:
  BddManager& mgr_;
  const std::vector<Formula>& vars_;
  std::unordered_map<BddManager::Node, Formula> memo_;
};

}  // namespace

Formula simplify(Formula f) {
  if (f.op() == Op::Atom || f.is_constant() || f.is_temporal())
    return f;
  thread_local std::unordered_map<Formula, Formula> cache;
  if (auto it = cache.find(f); it != cache.end())
    return it->second;

  std::vector<Formula> vars = propositional_variables(f);
  std::map<Formula, unsigned, StructuralLess> index;
  for (unsigned i = 0; i < vars.size(); ++i)
    index.emplace(vars[i], i);
  BddManager mgr(static_cast<unsigned>(vars.size()));
  BddManager::Node root = to_bdd(mgr, f, index);
  Formula r = CanonicalBuilder(mgr, vars).build(root);
  cache.emplace(f, r);
  return r;
}

bool propositionally_equivalent(Formula a, Formula b) { return simplify(a) == simplify(b); }

// ---------------------------------------------------------------------------
// Unfolding and the one-step derivative

namespace {

Formula unfold_raw(Formula f, const FormulaSet* opaque) {
  if (opaque && opaque->count(f))
    return f;
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
    case Op::Next:
      return f;
    case Op::Not:
      return make_not(unfold_raw(f.child(), opaque));
    case Op::And:
    case Op::Or: {
      std::vector<Formula> kids;
      for (Formula c : f.children())
        kids.push_back(unfold_raw(c, opaque));
      return f.op() == Op::And ? make_and(std::move(kids)) : make_or(std::move(kids));
    }
    case Op::Globally:
      return make_and(unfold_raw(f.child(), opaque), f);
    case Op::Finally:
      return make_or(unfold_raw(f.child(), opaque), f);
    case Op::Until:
      return make_or(unfold_raw(f.child(1), opaque), make_and(unfold_raw(f.child(0), opaque), f));
    case Op::Release:
      return make_and(unfold_raw(f.child(1), opaque), make_or(unfold_raw(f.child(0), opaque), f));
  }
  return f;
}

}  // namespace

Formula unfold(Formula f) { return simplify(unfold_raw(f, nullptr)); }
Formula unfold(Formula f, const FormulaSet& opaque) { return simplify(unfold_raw(f, &opaque)); }

Formula substitute(Formula f, const std::function<std::optional<bool>(const std::string&)>& value) {
  switch (f.op()) {
    case Op::Atom:
      if (auto v = value(f.name()))
        return *v ? Formula::tt() : Formula::ff();
      return f;
    case Op::Not:
      return make_not(substitute(f.child(), value));
    case Op::And:
    case Op::Or: {
      std::vector<Formula> kids;
      for (Formula c : f.children())
        kids.push_back(substitute(c, value));
      return f.op() == Op::And ? make_and(std::move(kids)) : make_or(std::move(kids));
    }
    default:
      return f;
  }
}

Formula strip_next(Formula f) {
  switch (f.op()) {
    case Op::Next:
      return f.child();
    case Op::Not:
      return make_not(strip_next(f.child()));
    case Op::And:
    case Op::Or: {
      std::vector<Formula> kids;
      for (Formula c : f.children())
        kids.push_back(strip_next(c));
      return f.op() == Op::And ? make_and(std::move(kids)) : make_or(std::move(kids));
    }
    default:
      return f;
  }
}

namespace {

Formula after_impl(Formula f, const Letter& nu, const FormulaSet* opaque) {
  Formula u = unfold_raw(f, opaque);
  Formula s = substitute(u, [&](const std::string& a) -> std::optional<bool> { return nu.count(a) > 0; });
  return simplify(strip_next(s));
}

}  // namespace

Formula after(Formula f, const Letter& nu) { return after_impl(f, nu, nullptr); }
Formula after(Formula f, const Letter& nu, const FormulaSet& opaque) { return after_impl(f, nu, &opaque); }

// ---------------------------------------------------------------------------
// Lasso evaluation

namespace {

class LassoEvaluator {
 public:
  LassoEvaluator(std::span<const Letter> prefix, std::span<const Letter> loop)
      : prefix_(prefix), loop_(loop), n_(prefix.size() + loop.size()) {}

  const std::vector<bool>& eval(Formula f) {
    if (auto it = memo_.find(f); it != memo_.end())
      return it->second;
    std::vector<bool> v(n_, false);
    switch (f.op()) {
      case Op::True:
        v.assign(n_, true);
        break;
      case Op::False:
        break;
      case Op::Atom:
        for (std::size_t i = 0; i < n_; ++i)
          v[i] = letter(i).count(f.name()) > 0;
        break;
      case Op::Not: {
        const auto& c = eval(f.child());
        for (std::size_t i = 0; i < n_; ++i)
          v[i] = !c[i];
        break;
      }
      case Op::And:
      case Op::Or: {
        const bool conj = f.op() == Op::And;
        v.assign(n_, conj);
        for (Formula c : f.children()) {
          const auto& cv = eval(c);
          for (std::size_t i = 0; i < n_; ++i)
            v[i] = conj ? (v[i] && cv[i]) : (v[i] || cv[i]);
        }
        break;
      }
      case Op::Next: {
        const auto& c = eval(f.child());
        for (std::size_t i = 0; i < n_; ++i)
          v[i] = c[succ(i)];
        break;
      }
      case Op::Until:
        v = until(eval(f.child(0)), eval(f.child(1)));
        break;
      case Op::Finally:
        v = until(std::vector<bool>(n_, true), eval(f.child()));
        break;
      case Op::Release:
        v = release(eval(f.child(0)), eval(f.child(1)));
        break;
      case Op::Globally:
        v = release(std::vector<bool>(n_, false), eval(f.child()));
        break;
    }
    return memo_.emplace(f, std::move(v)).first->second;
  }

 private:
  const Letter& letter(std::size_t i) const { return i < prefix_.size() ? prefix_[i] : loop_[i - prefix_.size()]; }
  std::size_t succ(std::size_t i) const { return i + 1 < n_ ? i + 1 : prefix_.size(); }

  // least fixpoint of s = b | (a & X s)
  std::vector<bool> until(std::vector<bool> a, const std::vector<bool>& b) const {
    std::vector<bool> s(n_, false);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = n_; k-- > 0;) {
        bool nv = b[k] || (a[k] && s[succ(k)]);
        if (nv != s[k]) {
          s[k] = nv;
          changed = true;
        }
      }
    }
    return s;
  }

  // greatest fixpoint of s = b & (a | X s)
  std::vector<bool> release(std::vector<bool> a, const std::vector<bool>& b) const {
    std::vector<bool> s(n_, true);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = n_; k-- > 0;) {
        bool nv = b[k] && (a[k] || s[succ(k)]);
        if (nv != s[k]) {
          s[k] = nv;
          changed = true;
        }
      }
    }
    return s;
  }

  std::span<const Letter> prefix_, loop_;
  std::size_t n_;
  std::unordered_map<Formula, std::vector<bool>> memo_;
};

}  // namespace

bool eval_lasso(Formula f, std::span<const Letter> prefix, std::span<const Letter> loop) {
  if (loop.empty())
    throw std::invalid_argument("eval_lasso: loop must be nonempty");
  return LassoEvaluator(prefix, loop).eval(f)[0];
}

}  // namespace semgame
