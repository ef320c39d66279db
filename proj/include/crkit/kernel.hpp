#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crkit/subst.hpp"
#include "crkit/term.hpp"

namespace crkit {

enum class RuleKind { Input, Decision, Upr, Conflict, ClauseLearn };

std::string rule_name(RuleKind k);

/**
 * One inference in a derivation DAG. A node owns its conclusion's
 * variables: no two nodes share a variable name. The stored instantiation
 * splits into sigma (the unifier, expressed over the premises' variables)
 * and renaming (the fresh renaming applied to the instantiated conclusion
 * afterwards), so
 *
 *   conclusion == renaming(sigma(<formula determined by the premises>)).
 */
struct CrNode {
  int id = -1;
  RuleKind kind = RuleKind::Input;
  Clause conclusion;

  // Upr: units[k] resolves against clause_positions[k] of the clause
  // premise's conclusion; the one remaining literal is propagated.
  std::vector<int> units;
  int clause_premise = -1;
  std::vector<size_t> clause_positions;
  size_t propagated_position = 0;

  // Conflict: two complementary unit premises.
  int left = -1;
  int right = -1;

  // ClauseLearn: the refuted node and the decisions discharged here,
  // in ascending id order. cl_index is the number of decisions.
  int bottom = -1;
  std::vector<int> discharged;
  int cl_index = 0;

  // Decision bookkeeping: id of the ClauseLearn that discharged this
  // decision, or -1 while open.
  int discharged_by = -1;

  Substitution sigma;
  Substitution renaming;

  /** compose(sigma, renaming): this node's effect on premise variables. */
  Substitution contribution() const;
};

/**
 * Derivation DAG for the conflict-resolution calculus. Nodes are appended
 * by the rule builders below; every builder instantiates, then renames the
 * conclusion apart from everything seen before, keeping the global
 * invariant that distinct nodes share no variables. Builders throw CrError
 * when a side condition fails; nothing is appended in that case.
 */
class CrDerivation {
public:
  /** Appends the clause as an axiom, renaming only colliding variables. */
  int add_input(const Clause& c);

  /** Appends a decision literal as an assumption-style unit. */
  int decide(const Literal& l);

  /**
   * Unit-propagating resolution. units lists the unit premises in match
   * order; the clause premise must have exactly units.size()+1 literals.
   * positions[k] is the clause literal resolved against units[k]; when
   * absent, the first association (smallest positions, tried in unit
   * order) that unifies is chosen. The instantiated leftover literal is
   * the conclusion.
   */
  int unit_propagating_resolution(
      const std::vector<int>& units, int clause_premise,
      const std::optional<std::vector<size_t>>& positions = std::nullopt);

  /** Conflict between two complementary units; concludes the contradiction. */
  int conflict(int left, int right);

  /**
   * Clause learning over a refuted node. Discharges the given open
   * decisions (each an ancestor of bottom); the conclusion takes, per
   * decision in ascending id order, the dual of its literal under every
   * path substitution from the decision to bottom, in path order, with
   * per-decision duplicates merged.
   */
  int clause_learn(int bottom, std::vector<int> discharge);

  /**
   * Factoring macro: group lists >=2 positions of the premise clause to
   * collapse into one literal (their simultaneous unifier instantiates
   * the rest). Expands into decisions, one propagation, a conflict, and a
   * clause learning whose conclusion is the factored clause; returns the
   * learning node's id.
   */
  int factoring(int premise, std::vector<size_t> group);

  const CrNode& node(int id) const;
  const std::vector<CrNode>& nodes() const { return nodes_; }
  size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  /** The literal of a unit conclusion; throws when the node is not unit. */
  const Literal& unit_of(int id) const;

  /** Premises in slot order, repeats preserved. */
  std::vector<int> premises(int id) const;

  /** Nodes having id among their premises; deduplicated, ascending. */
  std::vector<int> children(int id) const;

  /** id together with everything it is derived from. */
  std::set<int> ancestor_cone(int id) const;

  /**
   * Decisions in the cone of id whose discharging ClauseLearn is absent
   * from that cone (or that were never discharged). Ascending order.
   */
  std::vector<int> undischarged(int id) const;

  /**
   * One substitution per path from the decision to target: the
   * left-to-right composition of the contributions of the nodes strictly
   * after the decision. Paths are enumerated depth-first following
   * premise slots in order, so the result order is reproducible; a
   * premise used in several slots yields several paths.
   */
  std::vector<Substitution> path_substitutions(int decision, int target) const;

  /** The cone of sink as a fresh derivation plus the id mapping into it. */
  std::pair<CrDerivation, std::map<int, int>> restrict_to(int sink) const;

  /**
   * Rebuilds a derivation from raw nodes (certificate loading, tamper
   * tests). No validation happens here; run check_derivation. Decision
   * discharge back-pointers are recomputed from the ClauseLearn nodes.
   */
  static CrDerivation from_nodes(std::vector<CrNode> nodes);

private:
  int append(CrNode n, const Clause& pre_renaming);

  std::vector<CrNode> nodes_;
  std::set<Symbol> used_vars_;
};

enum class DerivationClass { Derivation, Proof, Refutation };

struct CheckViolation {
  int node = -1;
  std::string what;
};

/**
 * Result of re-checking a derivation. classification describes the sink:
 * Proof when every decision in its cone is discharged there, Refutation
 * when additionally the sink concludes the contradiction. A report with
 * violations is never a Proof.
 */
struct CheckReport {
  bool ok = true;
  std::vector<CheckViolation> violations;
  DerivationClass classification = DerivationClass::Derivation;
  std::string summary() const;
};

/**
 * Recomputes every node from its premises and stored sigma: sigma must
 * unify the induced pairs, the stored conclusion must be the instantiated
 * formula up to the stored renaming (checked both exactly and as a
 * positional variant), units must be units, discharges must be open
 * ancestors, every path from a discharged decision to the sink must pass
 * through its discharging node, and no two nodes may share a variable.
 * sink defaults to the last node.
 */
CheckReport check_derivation(const CrDerivation& d,
                             std::optional<int> sink = std::nullopt);

/**
 * Assumption-tracking view of one node: the open decision instances the
 * node's conclusion depends on. Entries carry the decision's node id and
 * the instantiated literal; duplicates by (id, literal) merge.
 */
struct Sequent {
  std::vector<std::pair<int, Literal>> antecedent;
  Clause succedent;
  std::string to_string() const;
};

Sequent to_sequent(const CrDerivation& d, int node);

}  // namespace crkit
