#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "semgame/ltl.hpp"

using namespace semgame;

namespace {

Formula P(const char* s) { return parse(s); }

struct RandomLasso {
  std::vector<Letter> prefix, loop;
};

RandomLasso random_lasso(std::mt19937_64& rng, const std::vector<std::string>& aps) {
  RandomLasso l;
  std::size_t total = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
  std::size_t loop = std::uniform_int_distribution<std::size_t>(1, total)(rng);
  for (std::size_t i = 0; i < total - loop; ++i)
    l.prefix.push_back(oracle::random_letter(rng, aps));
  for (std::size_t i = 0; i < loop; ++i)
    l.loop.push_back(oracle::random_letter(rng, aps));
  return l;
}

const std::vector<std::string> kAps{"a", "b", "c"};

}  // namespace

TEST_SUITE("ltl_core") {
  TEST_CASE("parse builds the expected trees") {
    Formula g = P("G a");
    CHECK(g.op() == Op::Globally);
    CHECK(g.child() == Formula::atom("a"));

    Formula fg = P("F G a");
    CHECK(fg.op() == Op::Finally);
    CHECK(fg.child().op() == Op::Globally);

    Formula u = P("a U b | c");
    REQUIRE(u.op() == Op::Or);
    CHECK(u == make_or(make_until(Formula::atom("a"), Formula::atom("b")), Formula::atom("c")));

    CHECK(P("a -> b") == P("!a | b"));
    CHECK(P("a U b U c") == P("a U (b U c)"));
    CHECK(P("tt") == Formula::tt());
    CHECK(P("!ff") == Formula::tt());
  }

  TEST_CASE("parse reports the failing position") {
    try {
      parse("a & (b | ");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 9);
    }
    CHECK_THROWS_AS(parse("a b"), ParseError);
    CHECK_THROWS_AS(parse("A"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
  }

  TEST_CASE("hash-consing identifies equal structure") {
    CHECK(P("a & b") == P("b & a"));
    CHECK(P("a & (b & c)") == P("(a & b) & c"));
    CHECK(P("G (a | b)") == make_globally(make_or(Formula::atom("b"), Formula::atom("a"))));
    CHECK(P("a & !a") == Formula::ff());
  }

  TEST_CASE("subformulas and top-level operators") {
    Formula phi = P("G((F a) & b) & F b");
    FormulaSet expected{P("a"), P("b"), P("F a"), P("F a & b"), P("G((F a) & b)"), P("F b"), phi};
    CHECK(subformulas(phi) == expected);
    CHECK(top_operators(phi) == FormulaSet{P("G((F a) & b)"), P("F b")});
    CHECK(top_operators(P("a & b")).empty());
  }

  TEST_CASE("unfold examples") {
    CHECK(unfold(P("G a")) == simplify(P("a & G a")));
    CHECK(propositionally_equivalent(unfold(P("a U b")), P("b | (a & (a U b))")));
    CHECK(unfold(P("G a & G !a")) == Formula::ff());
    CHECK(unfold(P("X a")) == P("X a"));
  }

  TEST_CASE("after examples") {
    CHECK(after(P("a"), {"a"}) == Formula::tt());
    CHECK(after(P("a"), {}) == Formula::ff());
    CHECK(after(P("a & X b"), {"a"}) == P("b"));
    CHECK(after(P("F a"), {}) == P("F a"));
    CHECK(after(P("G a"), {"a"}) == P("G a"));
  }

  TEST_CASE("eval_lasso examples") {
    std::vector<Letter> a{{"a"}}, none{{}};
    CHECK(eval_lasso(P("F a"), a, none));
    CHECK(eval_lasso(P("G a"), {}, a));
    CHECK_FALSE(eval_lasso(P("G a"), a, none));
    CHECK_FALSE(eval_lasso(P("G F a"), {}, none));
    CHECK(eval_lasso(P("F G a"), none, a));
    CHECK(eval_lasso(P("b R a"), {}, a));
  }

  TEST_CASE("nnf pushes negation to atoms") {
    CHECK(nnf(P("!(a U b)")) == P("!a R !b"));
    CHECK(nnf(P("!G F a")) == P("F G !a"));
    CHECK(nnf(P("!X a")) == P("X !a"));
    CHECK(is_nnf(P("!a & G b")));
    CHECK_FALSE(is_nnf(P("!G a")));
  }

  TEST_CASE("print then parse is the identity on random formulae") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 500; ++i) {
      Formula f = oracle::random_ltl(rng, kAps, 1 + i % 12);
      INFO(to_string(f));
      CHECK(parse(to_string(f)) == f);
    }
  }

  TEST_CASE("eval_lasso agrees with direct semantics") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
      Formula f = oracle::random_ltl(rng, kAps, 1 + i % 10);
      auto w = random_lasso(rng, kAps);
      INFO(to_string(f));
      CHECK(eval_lasso(f, w.prefix, w.loop) == oracle::NaiveLasso(w.prefix, w.loop).holds(f));
    }
  }

  TEST_CASE("nnf, unfold and simplify preserve semantics") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 600; ++i) {
      Formula f = oracle::random_ltl(rng, kAps, 1 + i % 10);
      auto w = random_lasso(rng, kAps);
      oracle::NaiveLasso ref(w.prefix, w.loop);
      bool expected = ref.holds(f);
      INFO(to_string(f));
      CHECK(is_nnf(nnf(f)));
      CHECK(ref.holds(nnf(f)) == expected);
      CHECK(ref.holds(unfold(f)) == expected);
      CHECK(ref.holds(simplify(f)) == expected);
    }
  }

  TEST_CASE("after is the one-letter derivative") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 1000; ++i) {
      Formula f = oracle::random_ltl(rng, kAps, 1 + i % 10);
      Letter nu = oracle::random_letter(rng, kAps);
      auto w = random_lasso(rng, kAps);
      std::vector<Letter> longer{nu};
      longer.insert(longer.end(), w.prefix.begin(), w.prefix.end());
      INFO(to_string(f));
      CHECK(oracle::NaiveLasso(longer, w.loop).holds(f) == oracle::NaiveLasso(w.prefix, w.loop).holds(after(f, nu)));
    }
  }

  TEST_CASE("after with opaque nodes keeps them intact") {
    Formula gf = P("G F a");
    FormulaSet opaque{gf};
    CHECK(after(gf, {}, opaque) == gf);
    CHECK(after(P("b & G F a"), {"b"}, opaque) == gf);
    CHECK(after(P("X b & G F a"), {}, opaque) == P("b & G F a"));
  }

  TEST_CASE("simplify is canonical") {
    CHECK(simplify(P("(a & b) | (a & !b)")) == P("a"));
    CHECK(simplify(P("a | !a")) == Formula::tt());
    CHECK(simplify(P("(F a & b) | (b & F a)")) == simplify(P("b & F a")));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
      Formula f = oracle::random_ltl(rng, kAps, 1 + i % 10);
      CHECK(simplify(simplify(f)) == simplify(f));
      CHECK(simplify(make_and(f, Formula::tt())) == simplify(f));
      CHECK(simplify(make_not(make_not(f))) == simplify(f));
    }
  }
}
