#pragma once

#include <map>
#include <optional>
#include <vector>

#include "crkit/error.hpp"
#include "crkit/kernel.hpp"
#include "crkit/subst.hpp"
#include "crkit/term.hpp"

namespace crkit {

/**
 * Rules of clausal natural deduction. Clauses play the role of formulas
 * (a clause is its literals' disjunction, the empty clause is the
 * contradiction) and derivations are trees whose leaves are axioms
 * (clauses taken as given) or assumptions (unit literals that later
 * introductions may discharge).
 */
enum class CndRule {
  Axiom,       // leaf: a clause taken as given
  Assumption,  // leaf: an assumed literal, open until discharged
  ImpElim,     // unit l and clause containing dual(l): drop one occurrence
  NegElim,     // complementary units derive the contradiction
  NegIntro,    // from the contradiction, discharge l, conclude [dual(l)]
  ImpIntro,    // from clause C, discharge l, conclude dual(l) | C
  AllElim,     // instantiate clause variables not free in open assumptions
  AllIntro,    // rename clause variables not free in open assumptions
};

std::string rule_name(CndRule k);

/**
 * One step of a clausal natural deduction. premises lists earlier node
 * ids: {unit, clause} for ImpElim, {left, right} for NegElim, {body} for
 * the remaining rules, empty for leaves. assumption carries the assumed
 * literal of an Assumption leaf and the literal discharged by an
 * introduction. sigma carries the instantiation of AllElim and the
 * renaming of AllIntro.
 */
struct CndNode {
  int id = -1;
  CndRule rule = CndRule::Axiom;
  Clause conclusion;
  std::vector<int> premises;
  Literal assumption = Literal::truth();
  Substitution sigma;
};

/**
 * Clausal natural deduction as an append-only node list. Every rule
 * matches syntactically exactly: there is no implicit renaming, so a
 * junction holds only when the literals are equal as written. Builders
 * throw CrError when a side condition fails; nothing is appended then.
 *
 * Open assumptions are tracked per node as a literal multiset. A premise
 * referenced from several nodes contributes its assumptions to each use,
 * as if the subderivation were copied, and an introduction discharges
 * every open occurrence of its literal at once.
 */
class CndDerivation {
public:
  /** Appends a clause as a leaf taken without assumptions. */
  int axiom(const Clause& c);

  /** Appends an assumed literal; rejects the propositional constants. */
  int assume(const Literal& l);

  /**
   * From a unit conclusion l and a clause conclusion containing dual(l),
   * concludes the clause minus the first occurrence of dual(l). The
   * clause premise must have at least two literals (complementary units
   * are NegElim's case).
   */
  int imp_elim(int unit, int clause);

  /** From exactly complementary unit conclusions, concludes ⊥. */
  int neg_elim(int left, int right);

  /**
   * From a body concluding ⊥, discharges every open occurrence of
   * `assumption` and concludes the unit [dual(assumption)].
   */
  int neg_intro(int body, const Literal& assumption);

  /**
   * From a body concluding a non-⊥ clause C, discharges every open
   * occurrence of `assumption` and concludes dual(assumption) | C with
   * the introduced literal first.
   */
  int imp_intro(int body, const Literal& assumption);

  /**
   * Concludes the body's clause instantiated by s. No variable moved by
   * s may occur in an open assumption of the body; a substitution that
   * leaves the clause unchanged is accepted.
   */
  int all_elim(int body, const Substitution& s);

  /**
   * Concludes the body's clause renamed by r, which must be an injective
   * variable renaming that neither moves a variable of an open assumption
   * nor maps onto a variable the clause keeps.
   */
  int all_intro(int body, const Substitution& r);

  const CndNode& node(int id) const;
  const std::vector<CndNode>& nodes() const { return nodes_; }
  size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  /** Open assumption multiset of the node, in canonical literal order. */
  const std::vector<Literal>& open_assumptions(int id) const;

  /** Number of nodes per rule, for shape comparisons between proofs. */
  std::map<CndRule, int> rule_counts() const;

  /**
   * Rebuilds a derivation from raw nodes (certificate loading, tamper
   * tests). Premise references must stay inside the prefix; everything
   * else is left to check_cnd.
   */
  static CndDerivation from_nodes(std::vector<CndNode> nodes);

private:
  int append(CndNode n, std::vector<Literal> open);
  std::vector<Literal> merged_open(const std::vector<int>& premises) const;
  static std::vector<Literal> discharged_from(std::vector<Literal> open,
                                              const Literal& a);

  std::vector<CndNode> nodes_;
  std::vector<std::vector<Literal>> open_;
};

/**
 * Recomputes every node from its premises: each conclusion must equal
 * the rule's result as written, and the instantiation rules must respect
 * the open assumptions. classification describes the sink (default: the
 * last node): Proof when it has no open assumption, Refutation when it
 * additionally concludes ⊥.
 */
CheckReport check_cnd(const CndDerivation& d,
                      std::optional<int> sink = std::nullopt);

/**
 * Composition of the contributions along a premise-to-conclusion path:
 * path[i] must be a premise of path[i+1], and the result composes the
 * contributions of path[1..] left to right. Applied to a literal of
 * path[0]'s conclusion it yields that literal's instance at the far end.
 */
Substitution global_substitution(const CrDerivation& d,
                                 const std::vector<int>& path);

/**
 * Unfolds the conflict-resolution derivation under the sink (default:
 * the last node) into a derivation without structural sharing: every
 * premise slot receives its own copy of the premise's subderivation.
 * Clause learning over copied decisions widens its conclusion — each
 * copy reaches the conflict along one path — so a factoring step is
 * appended per group of copies whose instances the shared form had
 * merged, restoring a variant of the original conclusion. Throws
 * Err::not_tree when no factoring can restore it, which happens when a
 * merge relied on variables shared between paths. Size can grow
 * exponentially in the sharing depth.
 */
CrDerivation expand_to_tree(const CrDerivation& d,
                            std::optional<int> sink = std::nullopt);

/**
 * Translates the derivation under the sink (default: the last node) into
 * clausal natural deduction with the same conclusion. The derivation is
 * unfolded into a tree of copies; each copy is instantiated by the
 * composition of the contributions below it, so every junction matches
 * exactly. Axioms quote input conclusions, followed by one AllElim when
 * the composed instantiation moves a variable of the clause; decisions
 * become assumptions; unit propagation becomes one ImpElim per unit;
 * a conflict becomes NegElim; clause learning becomes a NegIntro for the
 * last learned disjunct and one ImpIntro per remaining disjunct, so the
 * introduced literals rebuild the learned clause in order. Copies of a
 * decision whose instances coincide become the same assumption literal
 * and are discharged by the one introduction.
 */
CndDerivation cr_to_cnd(const CrDerivation& d,
                        std::optional<int> sink = std::nullopt);

}  // namespace crkit
