#pragma once

// Shared builders for the worked clause sets exercised across the test
// suite: a propositional diamond over {P, Q} and a first-order set whose
// refutation needs two rounds of learning. Tests pin the exact node
// structure, so keep construction order stable.

#include <vector>

#include "crkit/kernel.hpp"
#include "crkit/term.hpp"

namespace crkit::fix {

inline Term V(const Symbol& s) { return Term::var(s); }
inline Term C(const Symbol& s) { return Term::fn(s); }
inline Term F(const Symbol& s, std::vector<Term> args) {
  return Term::fn(s, std::move(args));
}
inline Literal pos(const Symbol& p, std::vector<Term> args = {}) {
  return Literal(true, p, std::move(args));
}
inline Literal neg(const Symbol& p, std::vector<Term> args = {}) {
  return Literal(false, p, std::move(args));
}

/** {P|Q, P|~Q, ~P|Q, ~P|~Q}: the smallest unsatisfiable diamond. */
inline std::vector<Clause> diamond_clauses() {
  return {
      Clause{pos("P"), pos("Q")},
      Clause{pos("P"), neg("Q")},
      Clause{neg("P"), pos("Q")},
      Clause{neg("P"), neg("Q")},
  };
}

/** {P(z)|Q, P(y)|~Q, ~P(a)|Q, ~P(b)|~Q}: first-order, two learning rounds. */
inline std::vector<Clause> two_round_clauses() {
  return {
      Clause{pos("P", {V("z")}), pos("Q")},
      Clause{pos("P", {V("y")}), neg("Q")},
      Clause{neg("P", {C("a")}), pos("Q")},
      Clause{neg("P", {C("b")}), neg("Q")},
  };
}

struct TwoRoundIds {
  int c1, c2, c3, c4;
  int d1, u1, u2, x1, f1;
  int d2, u3, u4, x2, f2;
  int u5, u6, u7, x3;
};

/**
 * The full refutation of two_round_clauses seeded with the decision P(x):
 * the first learning yields ~P(a)|~P(b), the second P(a), and the final
 * conflict closes at the top level. Premises are shared, not copied.
 */
inline TwoRoundIds build_two_round_refutation(CrDerivation& d) {
  TwoRoundIds n{};
  auto cs = two_round_clauses();
  n.c1 = d.add_input(cs[0]);
  n.c2 = d.add_input(cs[1]);
  n.c3 = d.add_input(cs[2]);
  n.c4 = d.add_input(cs[3]);

  n.d1 = d.decide(pos("P", {V("x")}));
  n.u1 = d.unit_propagating_resolution({n.d1}, n.c3, {{0}});
  n.u2 = d.unit_propagating_resolution({n.d1}, n.c4, {{0}});
  n.x1 = d.conflict(n.u1, n.u2);
  n.f1 = d.clause_learn(n.x1, {n.d1});

  n.d2 = d.decide(neg("P", {C("a")}));
  n.u3 = d.unit_propagating_resolution({n.d2}, n.c1, {{0}});
  n.u4 = d.unit_propagating_resolution({n.d2}, n.c2, {{0}});
  n.x2 = d.conflict(n.u3, n.u4);
  n.f2 = d.clause_learn(n.x2, {n.d2});

  n.u5 = d.unit_propagating_resolution({n.f2}, n.f1, {{0}});
  n.u6 = d.unit_propagating_resolution({n.u5}, n.c2, {{0}});
  n.u7 = d.unit_propagating_resolution({n.f2}, n.c3, {{0}});
  n.x3 = d.conflict(n.u6, n.u7);
  return n;
}

struct DiamondIds {
  int c1, c2, c3, c4;
  int d1, u1, u2, x1, f1;
  int u3, u4, x2;
};

/**
 * The refutation of diamond_clauses seeded with the decision P: learn ~P
 * from the first conflict, then propagate to a top-level conflict.
 */
inline DiamondIds build_diamond_refutation(CrDerivation& d) {
  DiamondIds n{};
  auto cs = diamond_clauses();
  n.c1 = d.add_input(cs[0]);
  n.c2 = d.add_input(cs[1]);
  n.c3 = d.add_input(cs[2]);
  n.c4 = d.add_input(cs[3]);

  n.d1 = d.decide(pos("P"));
  n.u1 = d.unit_propagating_resolution({n.d1}, n.c3, {{0}});
  n.u2 = d.unit_propagating_resolution({n.d1}, n.c4, {{0}});
  n.x1 = d.conflict(n.u1, n.u2);
  n.f1 = d.clause_learn(n.x1, {n.d1});

  n.u3 = d.unit_propagating_resolution({n.f1}, n.c1, {{0}});
  n.u4 = d.unit_propagating_resolution({n.f1}, n.c2, {{0}});
  n.x2 = d.conflict(n.u3, n.u4);
  return n;
}

}  // namespace crkit::fix
