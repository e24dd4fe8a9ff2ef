#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "semgame/bdd.hpp"
#include "semgame/trueness.hpp"

using namespace semgame;

namespace {
Formula P(const char* s) { return parse(s); }
TruenessValue Q(std::uint64_t num, unsigned exp) { return TruenessValue(num, exp); }
}  // namespace

TEST_SUITE("trueness") {
  TEST_CASE("bdd basics") {
    BddManager m(3);
    auto x = m.var(0), y = m.var(1), z = m.nvar(2);
    CHECK(static_cast<std::uint64_t>(m.count(x)) == 4);
    CHECK(static_cast<std::uint64_t>(m.count(m.bdd_and(x, y))) == 2);
    CHECK(static_cast<std::uint64_t>(m.count(m.bdd_or(x, z))) == 6);
    CHECK(m.bdd_and(x, m.bdd_not(x)) == BddManager::kFalse);
    CHECK(m.bdd_or(y, m.bdd_not(y)) == BddManager::kTrue);
    CHECK(m.implies(m.bdd_and(x, y), x));
    CHECK(static_cast<std::uint64_t>(m.count(BddManager::kTrue)) == 8);
    CHECK_THROWS(m.var(3));
  }

  TEST_CASE("bdd complement counts the rest") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
      BddManager m(8);
      auto f = BddManager::kFalse;
      for (int k = 0; k < 6; ++k) {
        unsigned v = static_cast<unsigned>(rng() % 8);
        f = (rng() & 1) ? m.bdd_or(f, m.var(v)) : m.bdd_and(f, m.nvar(v));
        f = (rng() & 1) ? f : m.bdd_or(f, m.bdd_and(m.var((v + 1) % 8), m.var((v + 3) % 8)));
      }
      CHECK(m.count(f) + m.count(m.bdd_not(f)) == uint128{256});
    }
  }

  TEST_CASE("dyadic values") {
    CHECK(Q(2, 3) == Q(1, 2));
    CHECK(Q(3, 2).to_string() == "3/4");
    CHECK(Q(1, 0).to_string() == "1");
    CHECK(Q(0, 5).to_string() == "0");
    CHECK(Q(1, 2) < Q(3, 3));
    CHECK(Q(1, 1).to_double() == doctest::Approx(0.5));
  }

  TEST_CASE("documented values") {
    CHECK(trueness(P("G a & G !a")) == Q(1, 2));
    CHECK(trueness(P("G a & G !a")).to_string() == "1/4");
    CHECK(trueness(Formula::tt()) == Q(1, 0));
    CHECK(trueness(Formula::ff()) == Q(0, 0));
    CHECK(trueness(P("a")) == Q(1, 1));
    CHECK(trueness(P("a | b"), {"a", "b"}) == Q(3, 2));
    CHECK(trueness(P("F (a & X b)")) == Q(1, 1));
    CHECK(trueness(P("a & X b")) == Q(1, 2));
    CHECK(trueness(P("b")) == Q(1, 1));
  }

  TEST_CASE("trueness of F psi is one half") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
      Formula psi = oracle::random_ltl(rng, {"a", "b", "c"}, 2 + i % 8);
      Formula f = make_finally(psi);
      if (f.is_constant())
        continue;
      INFO(to_string(f));
      CHECK(trueness(f) == Q(1, 1));
    }
  }

  TEST_CASE("agrees with brute-force enumeration") {
    std::mt19937_64 rng(9);
    std::vector<std::string> aps{"a", "b", "c", "d", "e", "f"};
    int checked = 0;
    while (checked < 400) {
      Formula f = oracle::random_ltl(rng, aps, 1 + rng() % 20);
      auto [sat, total] = oracle::brute_trueness(f);
      if (total > (1u << 12))
        continue;
      ++checked;
      INFO(to_string(f));
      CHECK(trueness(f) == TruenessValue(sat, static_cast<unsigned>(std::countr_zero(total))));
    }
  }

  TEST_CASE("padding, monotonicity and the conjunct bound") {
    std::mt19937_64 rng(10);
    std::vector<std::string> aps{"a", "b", "c"};
    for (int i = 0; i < 200; ++i) {
      Formula f = oracle::random_ltl(rng, aps, 1 + rng() % 8);
      Formula g = oracle::random_ltl(rng, aps, 1 + rng() % 8);
      CHECK(trueness(f, {"a", "b", "c"}) == trueness(f, {"a", "b", "c", "fresh"}));
      // in the shared space of f and g
      auto sat = [&](Formula h) {
        std::set<std::uint32_t> ids;
        std::vector<Formula> vars;
        oracle::abstract_vars(f, ids, vars);
        oracle::abstract_vars(g, ids, vars);
        std::uint64_t n = 0;
        for (std::uint64_t bits = 0; bits < (1ull << vars.size()); ++bits) {
          std::map<std::uint32_t, bool> value;
          for (std::size_t k = 0; k < vars.size(); ++k)
            value[vars[k].id()] = (bits >> k) & 1;
          n += oracle::eval_abstract(h, value) ? 1 : 0;
        }
        return n;
      };
      if (make_and(f, g).is_constant() || make_or(f, g).is_constant())
        continue;
      CHECK(sat(make_and(f, g)) <= std::min(sat(f), sat(g)));
      CHECK(sat(make_or(f, g)) >= std::max(sat(f), sat(g)));
    }
    // phi with trueness at most 1/2 conjoined with a fresh F psi
    CHECK(trueness(P("a & (b | X c)")) <= Q(1, 1));
    CHECK(trueness(P("a & (b | X c) & F d")) <= Q(1, 2));
    CHECK(trueness(P("b & F c")) == Q(1, 2));
  }

  TEST_CASE("capacity and universe checks") {
    CHECK_THROWS_AS(trueness(P("a & b & c & d"), 3), CapacityError);
    CHECK_NOTHROW(trueness(P("a & b & c"), 3));
    CHECK_THROWS_AS(trueness(P("a & z"), std::set<std::string>{"a"}), std::invalid_argument);
  }
}
