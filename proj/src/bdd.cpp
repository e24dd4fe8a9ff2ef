#include "semgame/bdd.hpp"

#include <algorithm>
#include <stdexcept>

namespace semgame {

BddManager::BddManager(unsigned num_vars) : num_vars_(num_vars) {
  nodes_.push_back({num_vars, kFalse, kFalse});
  nodes_.push_back({num_vars, kTrue, kTrue});
}

BddManager::Node BddManager::make(unsigned level, Node low, Node high) {
  if (low == high)
    return low;
  UniqueKey key{level, low, high};
  if (auto it = unique_.find(key); it != unique_.end())
    return it->second;
  Node id = static_cast<Node>(nodes_.size());
  nodes_.push_back({level, low, high});
  unique_.emplace(key, id);
  return id;
}

BddManager::Node BddManager::var(unsigned v) {
  if (v >= num_vars_)
    throw std::out_of_range("bdd variable index out of range");
  return make(v, kFalse, kTrue);
}

BddManager::Node BddManager::nvar(unsigned v) {
  if (v >= num_vars_)
    throw std::out_of_range("bdd variable index out of range");
  return make(v, kTrue, kFalse);
}

BddManager::Node BddManager::cofactor(Node f, unsigned level, bool value) const {
  if (nodes_[f].level != level)
    return f;
  return value ? nodes_[f].high : nodes_[f].low;
}

BddManager::Node BddManager::ite(Node f, Node g, Node h) {
  // terminal cases
  if (f == kTrue)
    return g;
  if (f == kFalse)
    return h;
  if (g == h)
    return g;
  if (g == kTrue && h == kFalse)
    return f;

  IteKey key{f, g, h};
  if (auto it = ite_cache_.find(key); it != ite_cache_.end())
    return it->second;

  unsigned top = std::min({level(f), level(g), level(h)});
  Node hi = ite(cofactor(f, top, true), cofactor(g, top, true), cofactor(h, top, true));
  Node lo = ite(cofactor(f, top, false), cofactor(g, top, false), cofactor(h, top, false));
  Node r = make(top, lo, hi);
  ite_cache_.emplace(key, r);
  return r;
}

uint128 BddManager::count(Node f) const {
  if (num_vars_ > 64)
    throw std::overflow_error("model count exceeds 64 variables");
  // counts[n] = models over the variables at levels [level(n), num_vars)
  std::vector<uint128> counts(nodes_.size(), 0);
  std::vector<bool> done(nodes_.size(), false);
  counts[kTrue] = 1;
  done[kFalse] = done[kTrue] = true;

  std::vector<Node> stack{f};
  while (!stack.empty()) {
    Node n = stack.back();
    if (done[n]) {
      stack.pop_back();
      continue;
    }
    Node lo = nodes_[n].low, hi = nodes_[n].high;
    if (!done[lo] || !done[hi]) {
      if (!done[lo])
        stack.push_back(lo);
      if (!done[hi])
        stack.push_back(hi);
      continue;
    }
    unsigned l = nodes_[n].level;
    counts[n] = (counts[lo] << (level(lo) - l - 1)) + (counts[hi] << (level(hi) - l - 1));
    done[n] = true;
    stack.pop_back();
  }
  return counts[f] << level(f);
}

}  // namespace semgame
