#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace semgame {

using uint128 = unsigned __int128;

/// Reduced ordered binary decision diagram over a fixed number of variables.
///
/// Variable `i` sits at level `i`; there is no dynamic reordering. Nodes are
/// plain indices into the manager, so they are only meaningful together with
/// the manager that produced them.
class BddManager {
 public:
  using Node = std::uint32_t;
  static constexpr Node kFalse = 0;
  static constexpr Node kTrue = 1;

  explicit BddManager(unsigned num_vars);

  unsigned num_vars() const { return num_vars_; }
  std::size_t node_count() const { return nodes_.size(); }

  Node var(unsigned v);
  Node nvar(unsigned v);

  Node ite(Node f, Node g, Node h);
  Node bdd_not(Node f) { return ite(f, kFalse, kTrue); }
  Node bdd_and(Node f, Node g) { return ite(f, g, kFalse); }
  Node bdd_or(Node f, Node g) { return ite(f, kTrue, g); }
  bool implies(Node f, Node g) { return bdd_and(f, bdd_not(g)) == kFalse; }

  /// Level of the decision variable; terminals report num_vars().
  unsigned level(Node f) const { return nodes_[f].level; }
  Node low(Node f) const { return nodes_[f].low; }
  Node high(Node f) const { return nodes_[f].high; }
  bool is_terminal(Node f) const { return f <= kTrue; }

  /// Number of satisfying assignments over all num_vars() variables.
  /// Exact for num_vars() <= 64.
  uint128 count(Node f) const;

 private:
  struct Entry {
    unsigned level;
    Node low;
    Node high;
  };
  struct IteKey {
    Node f, g, h;
    bool operator==(const IteKey&) const = default;
  };
  struct IteHash {
    std::size_t operator()(const IteKey& k) const noexcept {
      std::uint64_t x = (std::uint64_t{k.f} << 32) ^ (std::uint64_t{k.g} << 16) ^ k.h;
      return static_cast<std::size_t>(x * 0x9e3779b97f4a7c15ULL ^ (x >> 29));
    }
  };
  struct UniqueKey {
    unsigned level;
    Node low, high;
    bool operator==(const UniqueKey&) const = default;
  };
  struct UniqueHash {
    std::size_t operator()(const UniqueKey& k) const noexcept {
      std::uint64_t x = (std::uint64_t{k.low} << 32) | k.high;
      return static_cast<std::size_t>((x ^ (std::uint64_t{k.level} << 56)) * 0xff51afd7ed558ccdULL);
    }
  };

  Node make(unsigned level, Node low, Node high);
  Node cofactor(Node f, unsigned level, bool value) const;

  unsigned num_vars_;
  std::vector<Entry> nodes_;
  std::unordered_map<UniqueKey, Node, UniqueHash> unique_;
  std::unordered_map<IteKey, Node, IteHash> ite_cache_;
};

}  // namespace semgame
