#include <random>

#include "crkit/error.hpp"
#include "crkit/subst.hpp"
#include "crkit/term.hpp"
#include "crkit/unify.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace crkit;
using namespace crkit::fix;

TEST_CASE("terms: construction, depth, ordering, printing") {
  Term t = F("g", {F("f", {V("X")}), C("a")});
  CHECK(t.to_string() == "g(f(X),a)");
  CHECK(t.depth() == 2);
  CHECK(V("X").depth() == 0);
  CHECK(C("a").depth() == 0);
  CHECK(C("a").is_const());
  CHECK_FALSE(V("X").is_const());
  CHECK(t.contains_var("X"));
  CHECK_FALSE(t.contains_var("Y"));
  CHECK(V("X") < C("a"));  // variables sort first
  CHECK(V("X") == V("X"));
  CHECK(V("X") != V("Y"));
}

TEST_CASE("literals: polarity, duals, propositional constants") {
  Literal l = neg("P", {V("X")});
  CHECK(l.to_string() == "~P(X)");
  CHECK(dual(l) == pos("P", {V("X")}));
  CHECK(dual(l).same_atom(l));

  CHECK(Literal(false, kTruePred) == Literal::falsity());
  CHECK(Literal(false, kFalsePred) == Literal::truth());
  CHECK_THROWS_AS((void)Literal::truth().dual(), CrError);
  CHECK_THROWS_AS((void)Literal(true, kTruePred, {C("a")}), CrError);
}

TEST_CASE("clauses: normal form and classification") {
  CHECK(Clause{}.is_contradiction());
  CHECK(Clause{Literal::falsity()}.is_contradiction());
  CHECK(Clause{pos("P"), Literal::falsity()} == Clause{pos("P")});
  CHECK(Clause{pos("P"), Literal::truth()}.is_tautology_const());
  CHECK(Clause{pos("P", {V("X")})}.is_unit());
  CHECK_FALSE(Clause{Literal::truth()}.is_unit());
  CHECK(Clause{}.to_string() == "$false");
  CHECK(Clause({pos("P", {V("X")}), neg("Q")}).to_string() == "P(X) | ~Q");
  CHECK(Clause({pos("P", {F("f", {V("X")})})}).max_term_depth() == 1);
  CHECK(Clause({pos("P", {V("X")}), neg("Q", {V("Y")})}).vars() ==
        std::set<Symbol>{"X", "Y"});
  CHECK(Clause({pos("P", {C("a")})}).ground());
}

TEST_CASE("clauses: canonical order, multiset equality, variants") {
  Clause a{pos("Q"), pos("P", {V("X")}), neg("P", {V("X")})};
  Clause b{neg("P", {V("U")}), pos("Q"), pos("P", {V("U")})};
  CHECK(multiset_equal(a, Clause{neg("P", {V("X")}), pos("Q"), pos("P", {V("X")})}));
  CHECK_FALSE(multiset_equal(a, b));  // different variable names
  CHECK(a.canonical() == Clause{pos("P", {V("X")}), neg("P", {V("X")}), pos("Q")});

  CHECK(variant(a, b));
  CHECK(variant(Clause{pos("P", {V("X")}), pos("Q", {V("X")})},
                Clause{pos("P", {V("Y")}), pos("Q", {V("Y")})}));
  CHECK_FALSE(variant(Clause{pos("P", {V("X")}), pos("Q", {V("X")})},
                      Clause{pos("P", {V("U")}), pos("Q", {V("W")})}));
  CHECK_FALSE(variant(Clause{pos("P", {V("X")})}, Clause{pos("P", {C("a")})}));

  // Positional variants must align literal by literal.
  Clause p1{pos("P", {V("X")}), pos("Q", {V("Y")})};
  Clause p2{pos("P", {V("U")}), pos("Q", {V("W")})};
  Clause p3{pos("Q", {V("W")}), pos("P", {V("U")})};
  CHECK(positional_variant(p1, p2));
  CHECK_FALSE(positional_variant(p1, p3));
  CHECK(variant(p1, p3));  // multiset variance may reorder
  auto m = positional_variant_map(p1, p2);
  REQUIRE(m.has_value());
  CHECK(m->at("X") == "U");
  CHECK(m->at("Y") == "W");
}

TEST_CASE("fresh names: stems, suffixes, collisions") {
  NameReservoir r;
  CHECK(r.fresh("x") == "x_1");
  CHECK(r.fresh("x") == "x_2");
  CHECK(r.fresh("x_17") == "x_3");  // numeric suffixes fold into the stem
  r.reserve("x_4");
  CHECK(r.fresh("x") == "x_5");
  CHECK(r.fresh("y3") == "y_1");
  CHECK(r.seen("x_1"));
  CHECK_FALSE(r.seen("z"));
}

TEST_CASE("rename_apart touches only colliding variables") {
  Clause c{pos("P", {V("x")}), pos("Q", {V("y")})};
  auto [renamed, ren] = rename_apart(c, {"x"});
  CHECK(renamed == Clause{pos("P", {V("x_1")}), pos("Q", {V("y")})});
  CHECK(ren == Substitution{{"x", V("x_1")}});

  auto [same, none] = rename_apart(c, {"u"});
  CHECK(same == c);
  CHECK(none.empty());
}

TEST_CASE("substitutions: application, composition, printing") {
  Substitution s{{"X", C("a")}, {"Y", F("f", {V("Z")})}};
  CHECK(s.to_string() == "{X/a,Y/f(Z)}");
  CHECK(Substitution().to_string() == "{}");
  CHECK(s.apply(F("g", {V("X"), V("Y")})) ==
        F("g", {C("a"), F("f", {V("Z")})}));
  CHECK(s.apply(V("W")) == V("W"));
  CHECK(s.domain() == std::set<Symbol>{"X", "Y"});

  // Identity bindings vanish.
  Substitution id;
  id.bind("X", V("X"));
  CHECK(id.empty());

  Substitution s1{{"x", V("y")}};
  Substitution s2{{"y", C("a")}};
  CHECK(Substitution::compose(s1, s2) ==
        Substitution{{"x", C("a")}, {"y", C("a")}});

  CHECK(Substitution{{"X", V("Y")}}.is_renaming());
  CHECK_FALSE(Substitution{{"X", V("Z")}, {"Y", V("Z")}}.is_renaming());
  CHECK_FALSE(Substitution{{"X", C("a")}}.is_renaming());
  CHECK(s.is_idempotent());
  CHECK_FALSE(Substitution{{"X", F("f", {V("X")})}}.is_idempotent());

  Substitution r{{"X", V("Y")}};
  CHECK(r.restricted({"Z"}).empty());
  CHECK(r.restricted({"X"}) == r);
}

TEST_CASE("unification: pinned instances") {
  // P(f(x), y) against P(z, g(z)).
  auto r = unify({{pos("P", {F("f", {V("x")}), V("y")}),
                   pos("P", {V("z"), F("g", {V("z")})})}});
  REQUIRE(r);
  CHECK(*r.mgu == Substitution{{"z", F("f", {V("x")})},
                               {"y", F("g", {F("f", {V("x")})})}});

  auto occ = unify({{pos("P", {V("x")}), pos("P", {F("f", {V("x")})})}});
  CHECK_FALSE(occ);
  CHECK(occ.fail == UnifyFail::occurs_check);

  auto clash = unify({{std::make_pair(C("a"), C("b"))}});
  CHECK_FALSE(clash);
  CHECK(clash.fail == UnifyFail::clash);

  // Variable against variable binds the left one.
  auto vv = unify({{std::make_pair(V("x"), V("y"))}});
  REQUIRE(vv);
  CHECK(*vv.mgu == Substitution{{"x", V("y")}});

  // Polarity and predicate mismatches are clashes at the literal level.
  CHECK_FALSE(unify({{pos("P"), neg("P")}}));
  CHECK_FALSE(unify({{pos("P", {V("x")}), pos("Q", {V("x")})}}));
}

TEST_CASE("matching is one-way and consistent") {
  auto m = match({{F("f", {V("X"), V("Y")}), F("f", {C("a"), C("b")})}});
  REQUIRE(m.has_value());
  CHECK(*m == Substitution{{"X", C("a")}, {"Y", C("b")}});

  // The pattern variable may not match two different terms, even when one
  // of them is the variable itself.
  CHECK_FALSE(match({{F("f", {V("X"), V("X")}), F("f", {V("X"), C("a")})}}));
  CHECK_FALSE(match({{C("a"), V("X")}}));
  CHECK(match({{V("X"), F("f", {V("X")})}}).has_value());  // no occurs check
}

namespace {

Term random_term(std::mt19937_64& g, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 7 : 4);
  switch (pick(g)) {
    case 0: return V("X");
    case 1: return V("Y");
    case 2: return V("Z");
    case 3: return C("a");
    case 4: return C("b");
    case 5: return F("f", {random_term(g, depth - 1)});
    default:
      return F("g", {random_term(g, depth - 1), random_term(g, depth - 1)});
  }
}

// Every assignment of the pair's variables into this universe; used to
// enumerate all unifiers a pair has within the fragment.
const std::vector<Term>& theta_universe() {
  static const std::vector<Term> u = {
      C("a"),           C("b"),           V("X"),
      V("Y"),           V("Z"),           F("f", {C("a")}),
      F("f", {C("b")}), F("f", {V("X")}), F("f", {V("Y")}),
      F("g", {C("a"), V("X")}),           F("g", {V("X"), V("Y")}),
  };
  return u;
}

}  // namespace

TEST_CASE("unification: soundness, idempotence, and most-generality") {
  std::mt19937_64 g(20260817u);
  int unified = 0, enumerated = 0;
  for (int round = 0; round < 1500; ++round) {
    Term a = random_term(g, 2);
    Term b = random_term(g, 2);
    auto r = unify({{a, b}});

    std::set<Symbol> vars;
    a.collect_vars(vars);
    b.collect_vars(vars);
    std::vector<Symbol> vs(vars.begin(), vars.end());

    if (r) {
      ++unified;
      CHECK(r.mgu->apply(a) == r.mgu->apply(b));
      CHECK(r.mgu->is_idempotent());
      CHECK(r.mgu->apply(r.mgu->apply(a)) == r.mgu->apply(a));
    }

    // Enumerate every unifier with images in the small universe. Each must
    // factor through the computed unifier; none may exist on failure.
    const auto& uni = theta_universe();
    size_t total = 1;
    for (size_t i = 0; i < vs.size(); ++i) total *= uni.size();
    for (size_t code = 0; code < total; ++code) {
      Substitution theta;
      size_t c = code;
      for (const Symbol& v : vs) {
        theta.bind(v, uni[c % uni.size()]);
        c /= uni.size();
      }
      if (theta.apply(a) != theta.apply(b)) continue;
      ++enumerated;
      REQUIRE_MESSAGE(static_cast<bool>(r),
                      "found a unifier although unify failed: ",
                      a.to_string(), " vs ", b.to_string());
      std::vector<std::pair<Term, Term>> delta_pairs;
      for (const Symbol& v : vs)
        delta_pairs.emplace_back(r.mgu->apply(V(v)), theta.apply(V(v)));
      REQUIRE_MESSAGE(match(delta_pairs).has_value(),
                      "computed unifier is not most general for ",
                      a.to_string(), " vs ", b.to_string());
    }
  }
  CHECK(unified > 200);      // the sample exercises both outcomes
  CHECK(enumerated > 1000);  // and the universe enumeration is not vacuous
}

TEST_CASE("unification: simultaneous pair lists share bindings") {
  // x forced to a by the first pair must propagate into the second.
  auto r = unify({{std::make_pair(V("x"), C("a")),
                   std::make_pair(F("f", {V("x")}), F("f", {V("y")}))}});
  REQUIRE(r);
  CHECK(r.mgu->apply(V("y")) == C("a"));

  auto bad = unify({{std::make_pair(V("x"), C("a")),
                     std::make_pair(V("x"), C("b"))}});
  CHECK_FALSE(bad);
}
