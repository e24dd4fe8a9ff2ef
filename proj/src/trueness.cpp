#include "semgame/trueness.hpp"

#include <algorithm>
#include <compare>
#include <map>

namespace semgame {

namespace {

std::string u128_to_string(uint128 v) {
  if (v == 0)
    return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace

TruenessValue::TruenessValue(uint128 numerator, unsigned exponent) : numerator_(numerator), exponent_(exponent) {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  while (exponent_ > 0 && (numerator_ & 1) == 0) {
    numerator_ >>= 1;
    --exponent_;
  }
}

double TruenessValue::to_double() const {
  return static_cast<double>(numerator_) / static_cast<double>(uint128{1} << exponent_);
}

std::string TruenessValue::to_string() const {
  if (exponent_ == 0)
    return u128_to_string(numerator_);
  return u128_to_string(numerator_) + "/" + u128_to_string(uint128{1} << exponent_);
}

std::strong_ordering operator<=>(const TruenessValue& a, const TruenessValue& b) {
  unsigned e = std::max(a.exponent_, b.exponent_);
  uint128 x = a.numerator_ << (e - a.exponent_);
  uint128 y = b.numerator_ << (e - b.exponent_);
  return x <=> y;
}

TruenessValue trueness(Formula phi, unsigned var_cap) {
  // APs lexicographically first, then temporal variables by creation index
  std::vector<Formula> vars = propositional_variables(phi);
  std::stable_partition(vars.begin(), vars.end(), [](Formula f) { return f.op() == Op::Atom; });
  auto first_temporal = std::find_if(vars.begin(), vars.end(), [](Formula f) { return f.op() != Op::Atom; });
  std::sort(vars.begin(), first_temporal, [](Formula a, Formula b) { return a.name() < b.name(); });
  std::sort(first_temporal, vars.end(), [](Formula a, Formula b) { return a.id() < b.id(); });

  if (vars.size() > var_cap || vars.size() > 64)
    throw CapacityError("trueness: abstraction has " + std::to_string(vars.size()) + " variables, cap is " +
                        std::to_string(std::min(var_cap, 64u)));

  std::map<Formula, unsigned, StructuralLess> index;
  for (unsigned i = 0; i < vars.size(); ++i)
    index.emplace(vars[i], i);
  BddManager mgr(static_cast<unsigned>(vars.size()));
  BddManager::Node root = to_bdd(mgr, phi, index);
  return TruenessValue(mgr.count(root), static_cast<unsigned>(vars.size()));
}

TruenessValue trueness(Formula phi, const std::set<std::string>& ap_universe, unsigned var_cap) {
  for (const auto& a : atoms(phi))
    if (!ap_universe.count(a))
      throw std::invalid_argument("trueness: atom '" + a + "' not in the declared AP set");
  return trueness(phi, var_cap);
}

}  // namespace semgame
