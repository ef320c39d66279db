#include <string>
#include <vector>

#include "crkit/certificate.hpp"
#include "crkit/cnd.hpp"
#include "crkit/conflict_graph.hpp"
#include "crkit/dot.hpp"
#include "crkit/error.hpp"
#include "crkit/kernel.hpp"
#include "crkit/resolution.hpp"
#include "crkit/search.hpp"
#include "crkit/term.hpp"
#include "crkit/tptp.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace crkit;
using namespace crkit::fix;

namespace {

ParseError capture(const std::string& text) {
  try {
    parse_tptp_cnf(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError(0, 0, "unreachable");
}

}  // namespace

TEST_CASE("clause files parse names, roles, and clause shapes") {
  std::string text =
      "% leading comment\n"
      "cnf(c1, axiom, ( p(X) | ~q(f(X), a) )).\n"
      "cnf(c2, negated_conjecture, ~p(a)).   % trailing comment\n"
      "cnf(3, hypothesis, $false).\n"
      "cnf(c4, lemma,\n"
      "    ( r\n"
      "    | $false )).\n"
      "cnf(c5, plain, ( $true | weird )).";
  TptpProblem prob = parse_tptp_cnf(text);
  REQUIRE(prob.clauses.size() == 5);

  CHECK(prob.clauses[0].name == "c1");
  CHECK(prob.clauses[0].role == "axiom");
  Clause c1{pos("p", {V("X")}), neg("q", {F("f", {V("X")}), C("a")})};
  CHECK(prob.clauses[0].clause == c1);

  CHECK(prob.clauses[1].name == "c2");
  CHECK(prob.clauses[1].role == "negated_conjecture");
  CHECK(prob.clauses[1].clause == Clause{neg("p", {C("a")})});

  CHECK(prob.clauses[2].name == "3");
  CHECK(prob.clauses[2].clause.is_contradiction());

  // $false members drop out of a clause.
  CHECK(prob.clauses[3].clause == Clause{pos("r")});

  // A $true member collapses the clause to the tautology constant.
  CHECK(prob.clauses[4].clause.is_tautology_const());

  std::vector<Clause> list = prob.clause_list();
  REQUIRE(list.size() == 5);
  CHECK(list[0] == c1);
}

TEST_CASE("negated propositional constants normalize on parse") {
  TptpProblem a = parse_tptp_cnf("cnf(a1, axiom, ~$false).");
  CHECK(a.clauses[0].clause.is_tautology_const());
  TptpProblem b = parse_tptp_cnf("cnf(b1, axiom, ( p | ~$true )).");
  CHECK(b.clauses[0].clause == Clause{pos("p")});
}

TEST_CASE("parse errors carry positions and name the offence") {
  ParseError e = capture("cnf(c1, axiom, p)");
  CHECK(e.line() == 1);
  CHECK(e.col() == 18);
  CHECK(std::string(e.what()) == "1:18: expected '.'");

  e = capture("cnf(c1, conjecture, p).");
  CHECK(e.col() == 9);
  CHECK(std::string(e.what()) ==
        "1:9: role conjecture is not allowed in clause form; "
        "use negated_conjecture");

  e = capture("cnf(c1, axiom, p(a)).\ncnf(c2, axiom, p(a, b)).");
  CHECK(e.line() == 2);
  CHECK(e.col() == 16);
  CHECK(std::string(e.what()) == "2:16: 'p' is used with arity 2 after arity 1");

  e = capture("cnf(c1, axiom, p(a)).\ncnf(c2, axiom, q(p(a))).");
  CHECK(e.line() == 2);
  CHECK(std::string(e.what()) ==
        "2:18: 'p' is used both as a predicate and as a function symbol");

  e = capture("cnf(c1, axiom, p(X(a))).");
  CHECK(std::string(e.what()) == "1:18: variable X cannot take arguments");

  e = capture("fof(c1, axiom, p).");
  CHECK(std::string(e.what()) == "1:1: only cnf clauses are supported, found fof");

  e = capture("include('Axioms/GEO001-0.ax').");
  CHECK(std::string(e.what()) == "1:1: include directives are not supported");

  e = capture("cnf(c1, guess, p).");
  CHECK(std::string(e.what()) == "1:9: unknown role 'guess'");

  e = capture("cnf(c1, axiom, $maybe).");
  CHECK(std::string(e.what()) == "1:16: unknown $-word $maybe");

  e = capture("cnf(c1, axiom, p(1)).");
  CHECK(std::string(e.what()) == "1:18: numeric terms are not supported");

  e = capture("cnf(c1, axiom, p($true)).");
  CHECK(std::string(e.what()) == "1:18: $-words are not allowed inside terms");

  e = capture("cnf(c1, axiom, p). junk(c2, axiom, q).");
  CHECK(std::string(e.what()) == "1:20: expected a cnf clause, found 'junk'");

  e = capture("cnf(c1, axiom, ( p | q ).");
  CHECK(std::string(e.what()) == "1:25: expected ')'");
}

TEST_CASE("problem text written from clauses parses back unchanged") {
  std::vector<Clause> problem = {
      Clause{pos("p", {V("X")}), neg("q", {F("f", {V("X")}), C("a")})},
      Clause{neg("p", {C("a")})},
      Clause{},
  };
  CHECK(tptp_line("c1", "axiom", problem[0]) ==
        "cnf(c1, axiom, ( p(X) | ~q(f(X),a) )).");
  CHECK(tptp_line("c3", "axiom", problem[2]) == "cnf(c3, axiom, ( $false )).");

  TptpProblem back = parse_tptp_cnf(to_tptp(problem));
  REQUIRE(back.clauses.size() == 3);
  for (size_t i = 0; i < problem.size(); ++i)
    CHECK(back.clauses[i].clause == problem[i]);
  CHECK(back.clauses[1].name == "c2");
  CHECK(back.clauses[1].role == "axiom");
}

TEST_CASE("empty input and comment-only input parse to empty problems") {
  CHECK(parse_tptp_cnf("").clauses.empty());
  CHECK(parse_tptp_cnf("% nothing here\n  % nor here").clauses.empty());
}

namespace {

/** Two-round clause set in names the problem syntax can write back. */
std::vector<Clause> writable_two_round() {
  return {
      Clause{pos("p", {V("Z")}), pos("q")},
      Clause{pos("p", {V("Y")}), neg("q")},
      Clause{neg("p", {C("a")}), pos("q")},
      Clause{neg("p", {C("b")}), neg("q")},
  };
}

/** The two-round refutation over writable_two_round names. */
CrDerivation writable_two_round_refutation() {
  CrDerivation d;
  auto cs = writable_two_round();
  int c1 = d.add_input(cs[0]);
  int c2 = d.add_input(cs[1]);
  int c3 = d.add_input(cs[2]);
  int c4 = d.add_input(cs[3]);
  int d1 = d.decide(pos("p", {V("X")}));
  int u1 = d.unit_propagating_resolution({d1}, c3, {{0}});
  int u2 = d.unit_propagating_resolution({d1}, c4, {{0}});
  int x1 = d.conflict(u1, u2);
  int f1 = d.clause_learn(x1, {d1});
  int d2 = d.decide(neg("p", {C("a")}));
  int u3 = d.unit_propagating_resolution({d2}, c1, {{0}});
  int u4 = d.unit_propagating_resolution({d2}, c2, {{0}});
  int x2 = d.conflict(u3, u4);
  int f2 = d.clause_learn(x2, {d2});
  int u5 = d.unit_propagating_resolution({f2}, f1, {{0}});
  int u6 = d.unit_propagating_resolution({u5}, c2, {{0}});
  int u7 = d.unit_propagating_resolution({f2}, c3, {{0}});
  d.conflict(u6, u7);
  return d;
}

void check_same_cr(const CrDerivation& a, const CrDerivation& b) {
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    const CrNode& x = a.node(static_cast<int>(i));
    const CrNode& y = b.node(static_cast<int>(i));
    CHECK(x.kind == y.kind);
    CHECK(x.conclusion == y.conclusion);
    CHECK(x.units == y.units);
    CHECK(x.clause_premise == y.clause_premise);
    CHECK(x.clause_positions == y.clause_positions);
    CHECK(x.propagated_position == y.propagated_position);
    CHECK(x.left == y.left);
    CHECK(x.right == y.right);
    CHECK(x.bottom == y.bottom);
    CHECK(x.discharged == y.discharged);
    CHECK(x.sigma == y.sigma);
    CHECK(x.renaming == y.renaming);
  }
}

}  // namespace

TEST_CASE("problem digests are pinned and change with the problem") {
  CHECK(problem_digest({Clause{pos("p")}}) == 0x08d59e07b575f69fULL);
  CHECK(digest_hex(problem_digest({Clause{pos("p")}})) == "08d59e07b575f69f");
  std::vector<Clause> two = {
      Clause{pos("p", {V("X")}), neg("q", {F("f", {V("X")}), C("a")})},
      Clause{},
  };
  CHECK(digest_hex(problem_digest(two)) == "9ade8cd0eef2fe8f");
  CHECK(problem_digest(two) != problem_digest({two[0]}));
  CHECK(digest_hex(0) == "0000000000000000");
}

TEST_CASE("derivation certificates round-trip exactly") {
  CrDerivation d = writable_two_round_refutation();
  uint64_t dg = problem_digest(writable_two_round());
  std::string text = write_certificate(d, dg);

  std::string expected =
      "cert cr problem " + digest_hex(dg) +
      "\n"
      "node 0 input : p(Z) | q\n"
      "node 1 input : p(Y) | ~q\n"
      "node 2 input : ~p(a) | q\n"
      "node 3 input : ~p(b) | ~q\n"
      "node 4 decide : p(X)\n"
      "node 5 upr units 4 clause 2 pos 0 prop 1 sigma {X/a} : q\n"
      "node 6 upr units 4 clause 3 pos 0 prop 1 sigma {X/b} : ~q\n"
      "node 7 conflict 5 6 sigma {} : $false\n"
      "node 8 learn bottom 7 discharge 4 : ~p(a) | ~p(b)\n"
      "node 9 decide : ~p(a)\n"
      "node 10 upr units 9 clause 0 pos 0 prop 1 sigma {Z/a} : q\n"
      "node 11 upr units 9 clause 1 pos 0 prop 1 sigma {Y/a} : ~q\n"
      "node 12 conflict 10 11 sigma {} : $false\n"
      "node 13 learn bottom 12 discharge 9 : p(a)\n"
      "node 14 upr units 13 clause 8 pos 0 prop 1 sigma {} : ~p(b)\n"
      "node 15 upr units 14 clause 1 pos 0 prop 1 sigma {Y/b} : ~q\n"
      "node 16 upr units 13 clause 2 pos 0 prop 1 sigma {} : q\n"
      "node 17 conflict 15 16 sigma {} : $false\n";
  CHECK(text == expected);

  ParsedCertificate cert = parse_certificate(text);
  CHECK(cert.calculus == CertCalculus::Cr);
  CHECK(cert.digest == dg);
  check_same_cr(cert.cr, d);
  CheckReport rep = check_derivation(cert.cr);
  CHECK(rep.ok);
  CHECK(rep.classification == DerivationClass::Refutation);
}

TEST_CASE("certificates reload with comments and blank lines") {
  CrDerivation d = writable_two_round_refutation();
  std::string text = write_certificate(d, 7);
  std::string padded = "% checked by hand\n\n" + text + "\n  % done\n";
  check_same_cr(parse_certificate(padded).cr, d);
}

TEST_CASE("a searched refutation certifies through problem text") {
  std::string ptext =
      "cnf(c1, axiom, ( p(Z) | q )).\n"
      "cnf(c2, axiom, ( p(Y) | ~q )).\n"
      "cnf(c3, axiom, ( ~p(a) | q )).\n"
      "cnf(c4, axiom, ( ~p(b) | ~q )).\n";
  TptpProblem prob = parse_tptp_cnf(ptext);
  SolverOptions opts;
  opts.seed_decision = pos("p", {V("X")});
  SolveResult r = solve(prob.clause_list(), opts);
  REQUIRE(r.kind == SolveKind::Unsat);
  CrDerivation refutation = r.derivation.restrict_to(r.refutation).first;

  uint64_t dg = problem_digest(prob.clause_list());
  ParsedCertificate cert = parse_certificate(write_certificate(refutation, dg));
  check_same_cr(cert.cr, refutation);
  CheckReport rep = check_derivation(cert.cr);
  CHECK(rep.ok);
  CHECK(rep.classification == DerivationClass::Refutation);
}

TEST_CASE("resolution certificates round-trip with factoring") {
  ResDerivation r;
  int c1 = r.add_input(Clause{pos("p", {V("X")}), pos("p", {V("Y")})});
  int c2 = r.add_input(Clause{neg("p", {V("U")}), pos("q", {V("U")})});
  int c3 = r.add_input(Clause{neg("q", {C("a")})});
  int f = r.factor(c1, {0, 1});
  int s = r.resolve(f, c2, 0, 0);
  r.resolve(s, c3, 0, 0);

  std::string text = write_certificate(r, 3);
  ParsedCertificate cert = parse_certificate(text);
  REQUIRE(cert.calculus == CertCalculus::Res);
  CHECK(cert.digest == 3);
  REQUIRE(cert.res.size() == r.size());
  for (size_t i = 0; i < r.size(); ++i) {
    const ResNode& x = r.node(static_cast<int>(i));
    const ResNode& y = cert.res.node(static_cast<int>(i));
    CHECK(x.kind == y.kind);
    CHECK(x.conclusion == y.conclusion);
    CHECK(x.left == y.left);
    CHECK(x.right == y.right);
    CHECK(x.left_pos == y.left_pos);
    CHECK(x.right_pos == y.right_pos);
    CHECK(x.premise == y.premise);
    CHECK(x.group == y.group);
    CHECK(x.sigma == y.sigma);
    CHECK(x.renaming == y.renaming);
  }
  CheckReport rep = check_resolution(cert.res);
  CHECK(rep.ok);

  std::mt19937_64 rng(424242u);
  for (int round = 0; round < 25; ++round) {
    gen::GroundResInstance inst = gen::random_ground_refutation(rng, 10, 5);
    ParsedCertificate back =
        parse_certificate(write_certificate(inst.res, uint64_t(round)));
    CheckReport ground_rep = check_resolution(back.res);
    CHECK(ground_rep.ok);
    CHECK(ground_rep.classification == DerivationClass::Refutation);
    REQUIRE(back.res.size() == inst.res.size());
    for (size_t i = 0; i < inst.res.size(); ++i)
      CHECK(back.res.node(static_cast<int>(i)).conclusion ==
            inst.res.node(static_cast<int>(i)).conclusion);
  }
}

TEST_CASE("natural deduction certificates round-trip") {
  CrDerivation d = writable_two_round_refutation();
  CndDerivation nd = cr_to_cnd(d);
  std::string text = write_certificate(nd, 11);
  ParsedCertificate cert = parse_certificate(text);
  REQUIRE(cert.calculus == CertCalculus::Cnd);
  REQUIRE(cert.cnd.size() == nd.size());
  for (size_t i = 0; i < nd.size(); ++i) {
    const CndNode& x = nd.node(static_cast<int>(i));
    const CndNode& y = cert.cnd.node(static_cast<int>(i));
    CHECK(x.rule == y.rule);
    CHECK(x.conclusion == y.conclusion);
    CHECK(x.premises == y.premises);
    CHECK(x.assumption == y.assumption);
    CHECK(x.sigma == y.sigma);
  }
  CHECK(cert.cnd.rule_counts() == nd.rule_counts());
  CheckReport rep = check_cnd(cert.cnd);
  CHECK(rep.ok);
  CHECK(rep.classification == DerivationClass::Refutation);
}

TEST_CASE("unserializable names are refused with a typed error") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const CrError& e) {
      return e.code();
    }
    return Err::not_unifiable;
  };

  CrDerivation lower_var;
  lower_var.add_input(Clause{pos("p", {V("x")})});
  CHECK(code_of([&] { write_certificate(lower_var, 0); }) ==
        Err::not_serializable);

  CrDerivation upper_pred;
  upper_pred.add_input(Clause{pos("P")});
  CHECK(code_of([&] { write_certificate(upper_pred, 0); }) ==
        Err::not_serializable);

  ResDerivation res_bad;
  res_bad.add_input(Clause{pos("p", {F("G", {V("X")})})});
  CHECK(code_of([&] { write_certificate(res_bad, 0); }) ==
        Err::not_serializable);

  CndDerivation cnd_bad;
  cnd_bad.assume(pos("p", {V("okay_not")}));
  CHECK(code_of([&] { write_certificate(cnd_bad, 0); }) ==
        Err::not_serializable);
}

TEST_CASE("malformed certificates fail with line-anchored errors") {
  auto err = [](const std::string& text) -> std::string {
    try {
      parse_certificate(text);
    } catch (const ParseError& e) {
      return e.what();
    }
    return "no error";
  };

  CHECK(err("") == "1:1: empty certificate");
  CHECK(err("hello\n") == "1:1: a certificate starts with a cert line");
  CHECK(err("cert foo problem 0000000000000000\n") ==
        "1:6: unknown calculus 'foo'");
  CHECK(err("cert cr problem 123\n") ==
        "1:1: the digest is 16 lowercase hex digits");
  CHECK(err("cert cr problem 0000000000000000\nnode 1 input : p\n") ==
        "2:6: node ids count up from 0; expected 0");
  CHECK(err("cert cr problem 0000000000000000\nnode 0 input p\n") ==
        "2:1: a node line needs ' : ' before its clause");
  CHECK(err("cert cr problem 0000000000000000\nnode 0 guess : p\n") ==
        "2:1: unknown rule 'guess'");
  CHECK(err("cert cr problem 0000000000000000\nnode 0 input : p |\n") ==
        "2:19: expected a literal");
  CHECK(err("cert cr problem 0000000000000000\n"
            "node 0 input : p\n"
            "node 1 conflict 0 sigma {} : $false\n") ==
        "3:1: expected the right premise id, found 'sigma'");
  CHECK(err("cert cr problem 0000000000000000\n"
            "node 0 upr units clause 0 pos prop 1 sigma {X/,} : p\n") ==
        "2:1: in substitution: unexpected character ',' in term");
  CHECK(err("cert cr problem 0000000000000000\nnode 0 input extra : p\n") ==
        "2:1: unexpected token 'extra'");
  CHECK(err("cert cnd problem 0000000000000000\nnode 0 impelim 0 1 : p\n") ==
        "2:1: premise id 0 must name an earlier node");

  // Structural damage parses but is flagged by the checker.
  CrDerivation d = writable_two_round_refutation();
  std::string good = write_certificate(d, 5);
  std::string tampered = good;
  size_t at = tampered.find("node 13 learn bottom 12 discharge 9 : p(a)");
  REQUIRE(at != std::string::npos);
  tampered.replace(at + 38, 4, "p(b)");
  ParsedCertificate cert = parse_certificate(tampered);
  CheckReport rep = check_derivation(cert.cr);
  CHECK_FALSE(rep.ok);
}

TEST_CASE("derivations render to graphviz with one edge per premise") {
  CrDerivation d;
  DiamondIds n = build_diamond_refutation(d);
  std::string dot = to_dot(d);

  CHECK(dot.substr(0, 13) == "digraph cr {\n");
  CHECK(dot.find("  n0 [label=\"0: input\\nP | Q\", shape=box];\n") !=
        std::string::npos);
  CHECK(dot.find("  n4 [label=\"4: decision\\nP\", shape=diamond];\n") !=
        std::string::npos);
  CHECK(dot.find("  n7 [label=\"7: conflict\\n$false\", shape=doubleoctagon];"
                 "\n") != std::string::npos);
  CHECK(dot.find("  n8 [label=\"8: cl\\n~P\", shape=hexagon];\n") !=
        std::string::npos);
  CHECK(dot.find("  n4 -> n5;\n") != std::string::npos);
  CHECK(dot.find("  n4 -> n8 [style=dashed];\n") != std::string::npos);

  // One edge per premise slot plus one dashed edge per discharge.
  size_t edges = 0;
  for (size_t at = dot.find(" -> "); at != std::string::npos;
       at = dot.find(" -> ", at + 1))
    ++edges;
  size_t expected = 0;
  for (const CrNode& node : d.nodes()) {
    expected += d.premises(node.id).size();
    expected += node.discharged.size();
  }
  CHECK(edges == expected);

  ImplicationGraph g = graph_from_cr(d, n.x1);
  std::string gdot = to_dot(g);
  CHECK(gdot.substr(0, 16) == "digraph trail {\n");
  CHECK(gdot.find("shape=diamond") != std::string::npos);
  CHECK(gdot.find("  conflict [label=\"conflict\", shape=doubleoctagon];\n") !=
        std::string::npos);
  CHECK(gdot.find("-> conflict;\n") != std::string::npos);
  CHECK(gdot.find("[~P | Q]") != std::string::npos);

  ResDerivation r;
  int a = r.add_input(Clause{pos("p", {V("X")})});
  int b = r.add_input(Clause{neg("p", {C("a")})});
  r.resolve(a, b, 0, 0);
  std::string rdot = to_dot(r);
  CHECK(rdot.substr(0, 14) == "digraph res {\n");
  CHECK(rdot.find("  n2 [label=\"2: resolve\\n$false\", shape=ellipse];\n") !=
        std::string::npos);
  CHECK(rdot.find("  n0 -> n2;\n") != std::string::npos);
  CHECK(rdot.find("  n1 -> n2;\n") != std::string::npos);

  CndDerivation nd;
  int ax = nd.axiom(Clause{pos("p"), pos("q")});
  int as = nd.assume(neg("p"));
  int ie = nd.imp_elim(as, ax);
  nd.imp_intro(ie, neg("p"));
  std::string ndot = to_dot(nd);
  CHECK(ndot.substr(0, 14) == "digraph cnd {\n");
  CHECK(ndot.find("shape=box") != std::string::npos);
  CHECK(ndot.find("shape=diamond") != std::string::npos);
  CHECK(ndot.find("discharges ~p") != std::string::npos);
}

TEST_CASE("substitution text parses and rejects malformed bindings") {
  Substitution s;
  s.bind("X", C("a"));
  s.bind("Y", F("f", {C("b"), V("Z")}));
  CHECK(parse_substitution_text("{X/a,Y/f(b,Z)}") == s);
  CHECK(parse_substitution_text("{}").empty());
  CHECK(parse_substitution_text(s.to_string()) == s);

  auto fails = [](const std::string& text) {
    try {
      parse_substitution_text(text);
      return false;
    } catch (const ParseError&) {
      return true;
    }
  };
  CHECK(fails("{X/a"));
  CHECK(fails("{X/a,X/b}"));
  CHECK(fails("{X/X}"));
  CHECK(fails("{x/a}"));
  CHECK(fails("{X/a} extra"));
  CHECK(fails("X/a"));
}
