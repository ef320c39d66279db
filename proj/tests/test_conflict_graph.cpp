#include <functional>

#include "crkit/conflict_graph.hpp"
#include "crkit/error.hpp"
#include "crkit/kernel.hpp"
#include "crkit/resolution.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace crkit;
using fix::C;
using fix::neg;
using fix::pos;
using fix::V;

namespace {

Err code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const CrError& e) {
    return e.code();
  }
  throw std::logic_error("expected a CrError");
}

/// Every derived node consumes only inputs and the immediately preceding
/// derived node: the shape all graph readbacks have.
bool is_linear(const ResDerivation& r) {
  int prev = -1;
  for (int id = 0; id < static_cast<int>(r.size()); ++id) {
    if (r.node(id).kind == ResKind::Input) continue;
    for (int p : r.premises(id))
      if (r.node(p).kind != ResKind::Input && p != prev) return false;
    prev = id;
  }
  return true;
}

}  // namespace

TEST_CASE("slicing the first diamond conflict into an implication graph") {
  CrDerivation d;
  auto ids = fix::build_diamond_refutation(d);

  ImplicationGraph g = graph_from_cr(d, ids.x1);
  REQUIRE(g.vertices.size() == 3);
  REQUIRE(g.clauses.size() == 2);
  CHECK(g.vertices[0].is_decision);
  CHECK(g.vertices[0].literal == pos("P"));
  CHECK(g.vertices[1].literal == pos("Q"));
  CHECK(g.vertices[1].reason == 0);
  CHECK(g.vertices[1].premises == std::vector<int>{0});
  CHECK(g.vertices[2].literal == neg("Q"));
  CHECK(g.vertices[2].premises == std::vector<int>{0});
  CHECK(g.conflict_left == 1);
  CHECK(g.conflict_right == 2);
  CHECK(g.clauses[0] == Clause{neg("P"), pos("Q")});
  CHECK(g.clauses[1] == Clause{neg("P"), neg("Q")});

  // Analysis learns exactly what the derivation learned.
  CHECK(analyze_decisions(g) == Clause{neg("P")});
  CHECK(analyze_decisions(g) == d.node(ids.f1).conclusion);

  // Round trip: rebuild, check, slice again, compare.
  CrDerivation back = cr_from_graph(g);
  CHECK(check_derivation(back).ok);
  CHECK(isomorphic(g, graph_from_cr(back)));

  // Readback as a linear resolution proof of the learned clause.
  ResDerivation r = graph_to_resolution(g);
  REQUIRE(check_resolution(r).ok);
  REQUIRE(r.size() == 4);
  CHECK(r.node(2).kind == ResKind::Resolution);
  CHECK(r.node(2).conclusion == Clause{neg("P"), neg("P")});
  CHECK(r.node(3).kind == ResKind::Factoring);
  CHECK(r.node(3).conclusion == Clause{neg("P")});
  CHECK(is_linear(r));
}

TEST_CASE("slicing the second diamond conflict with a unit stand-in") {
  // After learning ~P the second conflict cites it as a unit clause; its
  // trail entry has no incoming edges.
  auto cs = fix::diamond_clauses();
  CrDerivation d;
  int c1 = d.add_input(cs[0]);
  int c2 = d.add_input(cs[1]);
  int notp = d.add_input(Clause{neg("P")});
  int u3 = d.unit_propagating_resolution({notp}, c1, {{0}});
  int u4 = d.unit_propagating_resolution({notp}, c2, {{0}});
  d.conflict(u3, u4);

  ImplicationGraph g = graph_from_cr(d);
  REQUIRE(g.vertices.size() == 3);
  REQUIRE(g.clauses.size() == 3);
  CHECK(g.vertices[0].literal == neg("P"));
  CHECK(!g.vertices[0].is_decision);
  CHECK(g.vertices[0].premises.empty());
  CHECK(g.clauses[g.vertices[0].reason] == Clause{neg("P")});
  CHECK(g.vertices[1].literal == pos("Q"));
  CHECK(g.vertices[2].literal == neg("Q"));

  // No decisions anywhere: analysis reports the contradiction itself.
  CHECK(analyze_decisions(g).is_contradiction());

  CrDerivation back = cr_from_graph(g);
  CHECK(check_derivation(back).ok);
  CHECK(isomorphic(g, graph_from_cr(back)));

  // The readback closes the refutation: P | P, then P, then the clash
  // against the learned unit.
  ResDerivation r = graph_to_resolution(g);
  REQUIRE(check_resolution(r).ok);
  REQUIRE(check_resolution(r).classification == DerivationClass::Refutation);
  REQUIRE(r.size() == 6);
  CHECK(r.node(3).conclusion == Clause{pos("P"), pos("P")});
  CHECK(r.node(4).conclusion == Clause{pos("P")});
  CHECK(r.node(5).conclusion.is_contradiction());
  CHECK(is_linear(r));
}

TEST_CASE("slices around learned clauses or second conflicts are rejected") {
  CrDerivation d;
  auto ids = fix::build_diamond_refutation(d);
  CHECK(code_of([&] { graph_from_cr(d, ids.x2); }) ==
        Err::not_single_conflict);
  CHECK(code_of([&] { graph_from_cr(d); }) == Err::not_single_conflict);
  CHECK(code_of([&] { graph_from_cr(d, ids.f1); }) == Err::no_conflict);
  CHECK(code_of([&] { graph_from_cr(d, ids.u1); }) == Err::no_conflict);
}

TEST_CASE("first-order slices round-trip and analyze up to renaming") {
  CrDerivation d;
  auto ids = fix::build_two_round_refutation(d);

  ImplicationGraph g1 = graph_from_cr(d, ids.x1);
  REQUIRE(g1.vertices.size() == 3);
  CHECK(g1.vertices[0].is_decision);
  CHECK(variant(Clause{g1.vertices[0].literal}, Clause{pos("P", {V("x")})}));
  CHECK(g1.vertices[1].literal == pos("Q"));
  CHECK(g1.vertices[2].literal == neg("Q"));
  CHECK(variant(analyze_decisions(g1), d.node(ids.f1).conclusion));

  CrDerivation back = cr_from_graph(g1);
  CHECK(check_derivation(back).ok);
  CHECK(isomorphic(g1, graph_from_cr(back)));

  // Non-ground reason clauses cannot be read back propositionally.
  ImplicationGraph g2 = graph_from_cr(d, ids.x2);
  CHECK(variant(analyze_decisions(g2), d.node(ids.f2).conclusion));
  CHECK(code_of([&] { graph_to_resolution(g2); }) == Err::not_ground);
}

TEST_CASE("implication graphs reject structural garbage") {
  ImplicationGraph g;
  GraphVertex v;
  v.id = 0;
  v.literal = pos("P");
  v.is_decision = false;  // propagated but cites no clause
  g.vertices.push_back(v);
  g.conflict_left = g.conflict_right = 0;
  CHECK(code_of([&] { cr_from_graph(g); }) == Err::dangling_ref);

  g.vertices[0].is_decision = true;
  g.conflict_left = 2;  // out of range
  CHECK(code_of([&] { cr_from_graph(g); }) == Err::no_conflict);
}

TEST_CASE("graph perturbations break isomorphism") {
  CrDerivation d;
  auto ids = fix::build_two_round_refutation(d);
  ImplicationGraph g = graph_from_cr(d, ids.x1);

  ImplicationGraph h = g;
  h.vertices[0].literal = pos("P", {C("a")});  // instance, not a variant
  CHECK(!isomorphic(g, h));

  h = g;
  h.vertices[2].premises = {1};  // rewired edge
  CHECK(!isomorphic(g, h));

  h = g;
  h.vertices[1].reason = 1;  // different reason label
  CHECK(!isomorphic(g, h));

  CHECK(isomorphic(g, g));
}

TEST_CASE("graph readbacks are linear; resolution at large is not") {
  // A derived clause feeding two later resolutions cannot come out of any
  // implication-graph readback, whose shape is always a single spine.
  ResDerivation w;
  int a = w.add_input(Clause{pos("P"), pos("Q")});
  int b = w.add_input(Clause{neg("Q"), pos("R")});
  int r1 = w.resolve(a, b, 1, 0);  // P | R
  int c = w.add_input(Clause{neg("R"), pos("T")});
  int r2 = w.resolve(r1, c, 1, 0);  // P | T
  int e = w.add_input(Clause{neg("R"), pos("U")});
  int r3 = w.resolve(r1, e, 1, 0);  // P | U: r1 used a second time
  (void)r2;
  (void)r3;
  REQUIRE(check_resolution(w).ok);
  CHECK(!is_linear(w));
}
