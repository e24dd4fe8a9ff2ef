#pragma once

#include <compare>
#include <set>
#include <stdexcept>
#include <string>

#include "semgame/bdd.hpp"
#include "semgame/ltl.hpp"

namespace semgame {

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact dyadic rational numerator / 2^exponent in [0, 1], kept reduced.
class TruenessValue {
 public:
  TruenessValue() = default;
  TruenessValue(uint128 numerator, unsigned exponent);

  uint128 numerator() const { return numerator_; }
  unsigned exponent() const { return exponent_; }
  double to_double() const;
  std::string to_string() const;  // "n/2^k" style, e.g. "3/4"

  friend bool operator==(const TruenessValue&, const TruenessValue&) = default;
  friend std::strong_ordering operator<=>(const TruenessValue& a, const TruenessValue& b);

 private:
  uint128 numerator_ = 0;
  unsigned exponent_ = 0;
};

inline constexpr unsigned kDefaultTruenessVarCap = 64;

/// Ratio of satisfying assignments of the propositional abstraction of `phi`,
/// where every top-level temporal subformula is a fresh variable.
TruenessValue trueness(Formula phi, unsigned var_cap = kDefaultTruenessVarCap);

/// Same, but checks that the atoms of `phi` are drawn from `ap_universe`.
/// Members of the universe not occurring in `phi` do not change the value.
TruenessValue trueness(Formula phi, const std::set<std::string>& ap_universe,
                       unsigned var_cap = kDefaultTruenessVarCap);

}  // namespace semgame
