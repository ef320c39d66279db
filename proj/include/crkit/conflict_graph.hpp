#pragma once

#include <vector>

#include "crkit/kernel.hpp"
#include "crkit/resolution.hpp"

namespace crkit {

/// One literal instance on the trail of an implication graph.  A decision
/// has neither reason nor premises; a propagated vertex carries the index of
/// its reason clause and the vertices its propagation consumed (empty when
/// the reason clause is itself a unit).
struct GraphVertex {
  int id = 0;
  Literal literal = Literal::truth();
  bool is_decision = false;
  int reason = -1;            ///< index into ImplicationGraph::clauses
  std::vector<int> premises;  ///< consumed vertices, in propagation order
};

/// An implication graph with exactly one conflict: vertices in trail order,
/// the reason clauses they cite, and the clashing vertex pair.
struct ImplicationGraph {
  std::vector<GraphVertex> vertices;
  std::vector<Clause> clauses;
  int conflict_left = -1;
  int conflict_right = -1;
};

/// Extracts the implication graph of a single-conflict slice: the ancestor
/// cone of `sink` (default: the last node), which must be a conflict and must
/// contain no other conflict and no learned clause.  Decisions and
/// propagations become vertices; clause premises and unit input clauses
/// become reason clauses.  Throws CrError(Err::no_conflict) when the sink is
/// not a conflict and CrError(Err::not_single_conflict) when the cone holds
/// other conflicts or learned clauses.
ImplicationGraph graph_from_cr(const CrDerivation& d,
                               std::optional<int> sink = std::nullopt);

/// Rebuilds the slice: one input per reason clause, one decision or
/// propagation per vertex, one closing conflict.  Conclusions come out as
/// variants of the vertex literals.
CrDerivation cr_from_graph(const ImplicationGraph& g);

/// The clause learned from the graph's conflict: rebuilds the slice and
/// discharges every decision that feeds the conflict.  A conflict with no
/// decision ancestors yields the empty clause.
Clause analyze_decisions(const ImplicationGraph& g);

/// Reads a ground implication graph back as a resolution derivation: the
/// conflict pair's reason clauses are resolved first, then every propagated
/// vertex whose dual survives is resolved away in reverse trail order, with
/// duplicate literals factored eagerly after each step.  The final clause
/// collects the duals of the decisions (the empty clause when there are
/// none).  Throws CrError(Err::not_ground) on non-ground vertices or
/// clauses and CrError(Err::bad_rule) when both conflict sides are
/// decisions, since such a clash cites no clause at all.
ResDerivation graph_to_resolution(const ImplicationGraph& g);

/// Structural equality modulo vertex order-preserving identity and one
/// consistent variable renaming across all literals and clauses.
bool isomorphic(const ImplicationGraph& a, const ImplicationGraph& b);

}  // namespace crkit
