#pragma once

#include <optional>
#include <set>
#include <vector>

#include "crkit/kernel.hpp"
#include "crkit/subst.hpp"
#include "crkit/term.hpp"

namespace crkit {

enum class ResKind { Input, Resolution, Factoring };

std::string res_rule_name(ResKind k);

/**
 * One step of a resolution derivation. The same storage convention as
 * derivation nodes applies: sigma is expressed over the premises'
 * variables and renaming carries the instantiated conclusion to fresh
 * ones, so no two nodes share a variable.
 */
struct ResNode {
  int id = -1;
  ResKind kind = ResKind::Input;
  Clause conclusion;

  // Resolution: the literals at left_pos / right_pos clash away.
  int left = -1;
  int right = -1;
  size_t left_pos = 0;
  size_t right_pos = 0;

  // Factoring: the literals at group collapse onto the first one.
  int premise = -1;
  std::vector<size_t> group;

  Substitution sigma;
  Substitution renaming;
};

/** Binary-resolution-plus-factoring derivation DAG. */
class ResDerivation {
public:
  int add_input(const Clause& c);

  /**
   * Binary resolution: the left premise's literal at left_pos clashes
   * with the right one's at right_pos under their most general unifier;
   * the conclusion keeps the remaining literals, left premise first.
   */
  int resolve(int left, int right, size_t left_pos, size_t right_pos);

  /** Factoring: collapse the >=2 group positions onto the first one. */
  int factor(int premise, std::vector<size_t> group);

  const ResNode& node(int id) const;
  const std::vector<ResNode>& nodes() const { return nodes_; }
  size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  std::vector<int> premises(int id) const;
  std::set<int> ancestor_cone(int id) const;

  /** Raw rebuild without validation; run check_resolution afterwards. */
  static ResDerivation from_nodes(std::vector<ResNode> nodes);

private:
  int append(ResNode n, const Clause& pre_renaming);

  std::vector<ResNode> nodes_;
  std::set<Symbol> used_vars_;
};

/**
 * Recomputes every step from its premises and stored sigma; same
 * discipline as the derivation checker. The classification is Refutation
 * when the sink concludes the contradiction, else Derivation.
 */
CheckReport check_resolution(const ResDerivation& d,
                             std::optional<int> sink = std::nullopt);

}  // namespace crkit
