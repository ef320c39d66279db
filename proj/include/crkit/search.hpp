#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crkit/kernel.hpp"
#include "crkit/term.hpp"

namespace crkit {

/**
 * Resource limits for the search. max_decisions bounds the decision
 * depth (the deepest open decision level), not the number of decisions
 * taken overall; max_term_depth discards propagated units whose literal
 * nests terms deeper than the bound.
 */
struct SolverLimits {
  int max_decisions = 64;
  long max_propagations = 200000;
  int max_conflicts = 20000;
  int max_term_depth = 6;
};

struct SolverOptions {
  SolverLimits limits;
  /** Used once, as the first decision, then retired. */
  std::optional<Literal> seed_decision;
};

/**
 * Unsat carries a checked refutation; Unknown reports why the search
 * stopped instead. The search never claims satisfiability: saturation
 * means no propagation, no conflict, and no admissible decision remained,
 * which certifies satisfiability only for fragments where the decision
 * candidates exhaust the relevant ground atoms.
 */
enum class SolveKind { Unsat, Unknown };

enum class StopReason {
  refuted,            // a conflict with every decision discharged
  saturation,         // nothing left to propagate or decide
  decision_limit,     // the next decision would exceed max_decisions
  propagation_limit,  // unit pushes exceeded max_propagations
  conflict_limit,     // conflicts after the first exceeded max_conflicts
  depth_limit,        // saturated, but only after discarding deep units
};

std::string to_string(SolveKind k);
std::string to_string(StopReason r);

struct SolveStats {
  int decisions = 0;
  long propagations = 0;
  int conflicts = 0;
  int max_level = 0;
  bool depth_pruned = false;
};

/**
 * Outcome of a search run. derivation holds the full trace; for Unsat,
 * refutation names the conflict node whose cone (restrict_to) is the
 * checked refutation. conflicts lists every conflict node in order and
 * learned the clause each non-final conflict taught, index-aligned.
 */
struct SolveResult {
  SolveKind kind = SolveKind::Unknown;
  StopReason reason = StopReason::saturation;
  CrDerivation derivation;
  int refutation = -1;
  std::vector<int> conflicts;
  std::vector<Clause> learned;
  SolveStats stats;
};

/**
 * Conflict-driven search in the conflict-resolution calculus. The trail
 * holds unit derivations (inputs, learned units, propagated units,
 * decisions); propagation resolves trail units against database clauses
 * oldest-trigger-first; a complementary pair of trail units closes a
 * conflict node. A conflict whose cone leaves no decision open refutes
 * the input; otherwise clause learning over the open decisions extends
 * the database, the trail unwinds while the learned clause stays
 * falsified, and the search continues. Decisions come in layers: the
 * one-shot seed, the first literal of the latest learned clause, one
 * fresh-variable atom per predicate appearing with both polarities, and
 * ground atoms read off the database and the problem's constants.
 */
SolveResult solve(const std::vector<Clause>& problem,
                  const SolverOptions& opts = {});

/**
 * The conflict node's cone with every clause-learning premise replaced
 * by an input stating its learned clause, so the result contains exactly
 * one conflict and suits the implication-graph reading. The stand-ins
 * summarize trail units that earlier rounds justified.
 */
CrDerivation conflict_slice(const CrDerivation& d, int conflict);

}  // namespace crkit
