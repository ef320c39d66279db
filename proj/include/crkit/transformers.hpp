#pragma once

#include <map>
#include <vector>

#include "crkit/kernel.hpp"
#include "crkit/resolution.hpp"

namespace crkit {

/// Result of simulating a resolution derivation step by step.  Every
/// resolution node has an image concluding a positional variant of its
/// conclusion; the bookkeeping vectors record which derivation nodes were
/// produced as the visible endpoints of each simulated step (macro-internal
/// helper nodes are not listed).
struct ResolutionTranslation {
  CrDerivation cr;
  std::map<int, int> image;  ///< resolution node id -> derivation node id
  std::vector<int> gadget_learns;     ///< learned-clause node per resolution
  std::vector<int> gadget_conflicts;  ///< conflict node per resolution
  std::vector<int> unit_conflicts;    ///< bare conflicts for unit-unit steps
  std::vector<int> factoring_learns;  ///< learned-clause node per factoring
};

/// Translates a resolution derivation into the conflict-resolution calculus.
/// Each resolution step becomes decide / propagate / conflict / learn; a
/// resolution between two unit clauses becomes a single conflict; each
/// factoring step becomes the factoring macro.
ResolutionTranslation resolution_to_cr(const ResDerivation& res);

/// Step counts for a translated refutation.  `length_cr` counts the visible
/// endpoints of the simulation — one learn and one conflict per simulated
/// resolution, one learn per factoring, plus the closing unit conflict and
/// the refuted endpoint — which equals 2n + m + 2 for n simulated resolutions
/// and m factorings.  `size_cr` counts every node of the produced derivation;
/// `size_estimate` is the coarse bound 2·inputs + 3·resolutions + factorings
/// and is reported without being enforced.
struct SimulationMetrics {
  int inputs = 0;
  int resolutions = 0;
  int factorings = 0;
  int unit_conflicts = 0;
  int length_cr = 0;
  int size_cr = 0;
  int size_estimate = 0;
};

/// Computes the metrics for the translation of a refutation.  Throws
/// CrError(Err::not_refutation) when the translated derivation does not end
/// in the empty clause and CrError(Err::metric_mismatch) when the recorded
/// endpoints violate the 2n + m + 2 length identity.
SimulationMetrics simulation_metrics(const ResolutionTranslation& t);

/// Partitions the literal positions of a clause into variable-disjoint
/// components (connected components of the shares-a-variable relation;
/// ground literals are singletons).  Components are ordered by their first
/// literal, positions ascending inside each component.
std::vector<std::vector<size_t>> split_positions(const Clause& c);

/// The component subclauses themselves, in split_positions order.
std::vector<Clause> split_components(const Clause& c);

/// Combines per-component refutations into one refutation of the original
/// problem.  `base` are the side clauses shared by every component problem,
/// `long_clause` the clause that was split, and `parts[i]` a refutation of
/// base + components[i].  The result refutes base + long_clause: component 1
/// is recovered from the long clause by propagating it against decisions on
/// the duals of all later components' literals, and each later component is
/// recovered by learning from the previous part's contradiction.  Throws
/// CrError(Err::not_disjoint) when a part's inputs do not match its component
/// problem and CrError(Err::not_refutation) when a part does not end in the
/// empty clause.
CrDerivation combine_split_refutations(const std::vector<Clause>& base,
                                       const Clause& long_clause,
                                       const std::vector<CrDerivation>& parts);

}  // namespace crkit
