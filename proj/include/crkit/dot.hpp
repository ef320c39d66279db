#pragma once

#include <string>

#include "crkit/cnd.hpp"
#include "crkit/conflict_graph.hpp"
#include "crkit/kernel.hpp"
#include "crkit/resolution.hpp"

namespace crkit {

/**
 * Graphviz renderings. Nodes are labelled "<id>: <rule>" over the
 * conclusion; edges run from premise to conclusion. Derivation shapes:
 * inputs and axioms are boxes, decisions and assumptions diamonds,
 * conflicts double octagons, learned clauses hexagons, everything else
 * ellipses. Clause-learning discharge edges are dashed.
 */
std::string to_dot(const CrDerivation& d);
std::string to_dot(const ResDerivation& d);
std::string to_dot(const CndDerivation& d);

/**
 * An implication graph renders its trail: decision vertices are diamonds,
 * propagated vertices ellipses citing their reason clause, and the clashing
 * pair feeds a double-octagon conflict mark.
 */
std::string to_dot(const ImplicationGraph& g);

}  // namespace crkit
