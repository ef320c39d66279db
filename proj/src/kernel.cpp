#include "crkit/kernel.hpp"

#include <algorithm>

#include "crkit/error.hpp"
#include "crkit/unify.hpp"

namespace crkit {

std::string rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::Input: return "input";
    case RuleKind::Decision: return "decision";
    case RuleKind::Upr: return "upr";
    case RuleKind::Conflict: return "conflict";
    case RuleKind::ClauseLearn: return "cl";
  }
  return "?";
}

Substitution CrNode::contribution() const {
  return Substitution::compose(sigma, renaming);
}

const CrNode& CrDerivation::node(int id) const {
  if (id < 0 || static_cast<size_t>(id) >= nodes_.size())
    throw CrError(Err::dangling_ref, "no node with id " + std::to_string(id));
  return nodes_[static_cast<size_t>(id)];
}

const Literal& CrDerivation::unit_of(int id) const {
  const CrNode& n = node(id);
  if (!n.conclusion.is_unit())
    throw CrError(Err::not_unit,
                  "node " + std::to_string(id) + " concludes " +
                      n.conclusion.to_string() + ", not a unit");
  return n.conclusion.lit(0);
}

int CrDerivation::append(CrNode n, const Clause& pre_renaming) {
  auto [renamed, rho] = rename_apart(pre_renaming, used_vars_);
  n.conclusion = renamed;
  n.renaming = rho;
  n.id = static_cast<int>(nodes_.size());
  for (const Symbol& v : renamed.vars()) used_vars_.insert(v);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

int CrDerivation::add_input(const Clause& c) {
  CrNode n;
  n.kind = RuleKind::Input;
  return append(std::move(n), c);
}

int CrDerivation::decide(const Literal& l) {
  if (l.is_prop_const())
    throw CrError(Err::top_bottom_literal, "cannot decide " + l.to_string());
  CrNode n;
  n.kind = RuleKind::Decision;
  return append(std::move(n), Clause{l});
}

namespace {

// Candidate filter: can the clause literal at p resolve against the unit?
bool resolvable(const Literal& clause_lit, const Literal& unit) {
  return !clause_lit.is_prop_const() && clause_lit.positive() != unit.positive() &&
         clause_lit.pred() == unit.pred() &&
         clause_lit.args().size() == unit.args().size();
}

// Smallest-position association search, units considered left to right.
bool associate(const Clause& c, const std::vector<Literal>& unit_lits, size_t k,
               std::vector<bool>& taken, std::vector<size_t>& chosen) {
  if (k == unit_lits.size()) {
    std::vector<std::pair<Literal, Literal>> pairs;
    for (size_t i = 0; i < chosen.size(); ++i)
      pairs.emplace_back(dual(c.lit(chosen[i])), unit_lits[i]);
    return static_cast<bool>(unify(pairs));
  }
  for (size_t p = 0; p < c.size(); ++p) {
    if (taken[p] || !resolvable(c.lit(p), unit_lits[k])) continue;
    taken[p] = true;
    chosen.push_back(p);
    if (associate(c, unit_lits, k + 1, taken, chosen)) return true;
    chosen.pop_back();
    taken[p] = false;
  }
  return false;
}

}  // namespace

int CrDerivation::unit_propagating_resolution(
    const std::vector<int>& units, int clause_premise,
    const std::optional<std::vector<size_t>>& positions) {
  if (units.empty())
    throw CrError(Err::bad_rule, "unit propagation needs at least one unit premise");
  const Clause& c = node(clause_premise).conclusion;
  if (c.size() != units.size() + 1)
    throw CrError(Err::arity_mismatch,
                  "clause premise has " + std::to_string(c.size()) +
                      " literals but " + std::to_string(units.size()) +
                      " units were given");
  std::vector<Literal> unit_lits;
  for (int u : units) unit_lits.push_back(unit_of(u));

  std::vector<size_t> pos;
  if (positions) {
    pos = *positions;
    if (pos.size() != units.size())
      throw CrError(Err::bad_position, "one clause position per unit is required");
    std::vector<bool> taken(c.size(), false);
    for (size_t p : pos) {
      if (p >= c.size())
        throw CrError(Err::bad_position, "clause position " + std::to_string(p) +
                                             " out of range");
      if (taken[p])
        throw CrError(Err::bad_position,
                      "clause position " + std::to_string(p) + " used twice");
      taken[p] = true;
    }
  } else {
    std::vector<bool> taken(c.size(), false);
    if (!associate(c, unit_lits, 0, taken, pos))
      throw CrError(Err::no_association,
                    "no resolvable association of units against " + c.to_string());
  }

  size_t remaining = c.size();
  for (size_t p = 0; p < c.size(); ++p)
    if (std::find(pos.begin(), pos.end(), p) == pos.end()) remaining = p;

  std::vector<std::pair<Literal, Literal>> pairs;
  for (size_t k = 0; k < pos.size(); ++k) {
    if (c.lit(pos[k]).is_prop_const())
      throw CrError(Err::top_bottom_literal,
                    "cannot resolve on " + c.lit(pos[k]).to_string());
    pairs.emplace_back(dual(c.lit(pos[k])), unit_lits[k]);
  }
  UnifyResult r = unify(pairs);
  if (!r)
    throw CrError(r.fail == UnifyFail::occurs_check ? Err::occurs_check
                                                    : Err::not_unifiable,
                  "units do not match the clause literals");

  CrNode n;
  n.kind = RuleKind::Upr;
  n.units = units;
  n.clause_premise = clause_premise;
  n.clause_positions = pos;
  n.propagated_position = remaining;
  n.sigma = *r.mgu;
  return append(std::move(n), Clause{r.mgu->apply(c.lit(remaining))});
}

int CrDerivation::conflict(int left, int right) {
  const Literal& l = unit_of(left);
  const Literal& r = unit_of(right);
  if (l.positive() == r.positive())
    throw CrError(Err::same_polarity, l.to_string() + " and " + r.to_string() +
                                          " have the same polarity");
  Literal la(true, l.pred(), l.args());
  Literal ra(true, r.pred(), r.args());
  UnifyResult res = unify({{la, ra}});
  if (!res)
    throw CrError(res.fail == UnifyFail::occurs_check ? Err::occurs_check
                                                      : Err::not_unifiable,
                  l.to_string() + " does not clash with " + r.to_string());
  CrNode n;
  n.kind = RuleKind::Conflict;
  n.left = left;
  n.right = right;
  n.sigma = *res.mgu;
  return append(std::move(n), Clause{});
}

int CrDerivation::clause_learn(int bottom, std::vector<int> discharge) {
  if (!node(bottom).conclusion.is_contradiction())
    throw CrError(Err::not_bottom, "node " + std::to_string(bottom) +
                                       " does not conclude the contradiction");
  if (discharge.empty())
    throw CrError(Err::bad_rule, "clause learning must discharge a decision");
  std::sort(discharge.begin(), discharge.end());
  if (std::adjacent_find(discharge.begin(), discharge.end()) != discharge.end())
    throw CrError(Err::bad_rule, "a decision cannot be discharged twice at once");

  std::set<int> cone = ancestor_cone(bottom);
  for (int d : discharge) {
    const CrNode& dn = node(d);
    if (dn.kind != RuleKind::Decision)
      throw CrError(Err::bad_rule,
                    "node " + std::to_string(d) + " is not a decision");
    if (!cone.count(d))
      throw CrError(Err::not_ancestor, "decision " + std::to_string(d) +
                                           " is not an ancestor of the conflict");
    if (dn.discharged_by != -1)
      throw CrError(Err::already_discharged,
                    "decision " + std::to_string(d) + " is already discharged");
  }

  std::vector<Literal> lits;
  for (int d : discharge) {
    Literal base = dual(unit_of(d));
    std::vector<Literal> seen;
    for (const Substitution& s : path_substitutions(d, bottom)) {
      Literal inst = s.apply(base);
      if (std::find(seen.begin(), seen.end(), inst) == seen.end()) {
        seen.push_back(inst);
        lits.push_back(inst);
      }
    }
  }

  CrNode n;
  n.kind = RuleKind::ClauseLearn;
  n.bottom = bottom;
  n.discharged = discharge;
  n.cl_index = static_cast<int>(discharge.size());
  int id = append(std::move(n), Clause(std::move(lits)));
  for (int d : discharge) nodes_[static_cast<size_t>(d)].discharged_by = id;
  return id;
}

int CrDerivation::factoring(int premise, std::vector<size_t> group) {
  const Clause c = node(premise).conclusion;
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  if (group.size() < 2)
    throw CrError(Err::bad_rule, "factoring needs at least two positions");
  for (size_t g : group)
    if (g >= c.size())
      throw CrError(Err::bad_position,
                    "clause position " + std::to_string(g) + " out of range");

  std::vector<std::pair<Literal, Literal>> pairs;
  for (size_t k = 1; k < group.size(); ++k)
    pairs.emplace_back(c.lit(group[0]), c.lit(group[k]));
  UnifyResult f = unify(pairs);
  if (!f)
    throw CrError(f.fail == UnifyFail::occurs_check ? Err::occurs_check
                                                    : Err::not_unifiable,
                  "grouped literals do not unify");

  // The factored clause keeps the first group occurrence in place among
  // the leftover literals. One decision per kept literal (instantiated by
  // the group's unifier), created in premise order so that learning, which
  // discharges in id order, reproduces exactly that clause.
  std::vector<size_t> rest;
  for (size_t p = 0; p < c.size(); ++p)
    if (std::find(group.begin(), group.end(), p) == group.end()) rest.push_back(p);
  std::map<size_t, int> dec;
  std::vector<int> discharge;
  for (size_t p = 0; p < c.size(); ++p) {
    if (p != group[0] &&
        std::find(group.begin(), group.end(), p) != group.end())
      continue;
    dec.emplace(p, decide(dual(f.mgu->apply(c.lit(p)))));
    discharge.push_back(dec.at(p));
  }

  if (rest.empty()) {
    // The whole clause factors to one literal: resolve all but the first
    // group occurrence against the decision and clash the propagated copy
    // with the decision itself.
    int psi = dec.at(group[0]);
    std::vector<int> us(group.size() - 1, psi);
    std::vector<size_t> ps(group.begin() + 1, group.end());
    int u = unit_propagating_resolution(us, premise, ps);
    int x = conflict(u, psi);
    return clause_learn(x, {psi});
  }

  size_t leftover = rest.back();
  std::vector<int> us(group.size(), dec.at(group[0]));
  std::vector<size_t> ps(group.begin(), group.end());
  for (size_t p : rest)
    if (p != leftover) {
      us.push_back(dec.at(p));
      ps.push_back(p);
    }
  int u = unit_propagating_resolution(us, premise, ps);
  int x = conflict(u, dec.at(leftover));
  return clause_learn(x, discharge);
}

std::vector<int> CrDerivation::premises(int id) const {
  const CrNode& n = node(id);
  switch (n.kind) {
    case RuleKind::Upr: {
      std::vector<int> p = n.units;
      p.push_back(n.clause_premise);
      return p;
    }
    case RuleKind::Conflict:
      return {n.left, n.right};
    case RuleKind::ClauseLearn:
      return {n.bottom};
    default:
      return {};
  }
}

std::vector<int> CrDerivation::children(int id) const {
  node(id);  // range check
  std::vector<int> out;
  for (const CrNode& n : nodes_) {
    std::vector<int> ps = premises(n.id);
    if (std::find(ps.begin(), ps.end(), id) != ps.end()) out.push_back(n.id);
  }
  return out;
}

std::set<int> CrDerivation::ancestor_cone(int id) const {
  node(id);  // range check
  std::set<int> cone;
  std::vector<int> stack = {id};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (!cone.insert(v).second) continue;
    for (int p : premises(v)) stack.push_back(p);
  }
  return cone;
}

std::vector<int> CrDerivation::undischarged(int id) const {
  std::set<int> cone = ancestor_cone(id);
  std::vector<int> out;
  for (int v : cone) {
    const CrNode& n = node(v);
    if (n.kind != RuleKind::Decision) continue;
    if (n.discharged_by == -1 || !cone.count(n.discharged_by)) out.push_back(v);
  }
  return out;
}

std::vector<Substitution> CrDerivation::path_substitutions(int decision,
                                                           int target) const {
  node(decision);
  node(target);
  if (decision == target) return {Substitution()};

  // Forward pass over ids (ids are topological): which nodes descend from
  // the decision, and the compositions that reach them.
  std::map<int, std::vector<Substitution>> comps;
  comps[decision] = {Substitution()};
  for (int v = decision + 1; v <= target; ++v) {
    std::vector<Substitution> here;
    Substitution contrib = node(v).contribution();
    for (int p : premises(v)) {
      auto it = comps.find(p);
      if (it == comps.end()) continue;
      for (const Substitution& s : it->second)
        here.push_back(Substitution::compose(s, contrib));
    }
    if (!here.empty()) comps.emplace(v, std::move(here));
  }
  auto it = comps.find(target);
  return it == comps.end() ? std::vector<Substitution>{} : it->second;
}

std::pair<CrDerivation, std::map<int, int>> CrDerivation::restrict_to(int sink) const {
  std::set<int> cone = ancestor_cone(sink);
  std::map<int, int> remap;
  for (int v : cone) remap.emplace(v, static_cast<int>(remap.size()));
  std::vector<CrNode> kept;
  for (int v : cone) {
    CrNode n = node(v);
    n.id = remap.at(v);
    for (int& u : n.units) u = remap.at(u);
    if (n.clause_premise != -1) n.clause_premise = remap.at(n.clause_premise);
    if (n.left != -1) n.left = remap.at(n.left);
    if (n.right != -1) n.right = remap.at(n.right);
    if (n.bottom != -1) n.bottom = remap.at(n.bottom);
    for (int& d : n.discharged) d = remap.at(d);
    n.discharged_by = -1;  // recomputed below
    kept.push_back(std::move(n));
  }
  return {from_nodes(std::move(kept)), remap};
}

CrDerivation CrDerivation::from_nodes(std::vector<CrNode> nodes) {
  CrDerivation d;
  for (size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].id = static_cast<int>(i);
    nodes[i].discharged_by = -1;
    for (const Symbol& v : nodes[i].conclusion.vars()) d.used_vars_.insert(v);
  }
  for (const CrNode& n : nodes) {
    if (n.kind != RuleKind::ClauseLearn) continue;
    for (int dec : n.discharged)
      if (dec >= 0 && static_cast<size_t>(dec) < nodes.size() &&
          nodes[static_cast<size_t>(dec)].kind == RuleKind::Decision &&
          nodes[static_cast<size_t>(dec)].discharged_by == -1)
        nodes[static_cast<size_t>(dec)].discharged_by = n.id;
  }
  d.nodes_ = std::move(nodes);
  return d;
}

std::string CheckReport::summary() const {
  if (ok) {
    switch (classification) {
      case DerivationClass::Refutation: return "ok: refutation";
      case DerivationClass::Proof: return "ok: proof";
      case DerivationClass::Derivation: return "ok: derivation";
    }
  }
  std::string s = "invalid:";
  for (const CheckViolation& v : violations)
    s += "\n  node " + std::to_string(v.node) + ": " + v.what;
  return s;
}

namespace {

// Checks that the stored conclusion is the instantiated formula: exactly
// under the stored renaming, and independently up to positional renaming
// (the form certificates can re-establish without the renaming on file).
void check_conclusion(const CrNode& n, const Clause& pre,
                      std::vector<CheckViolation>& out) {
  if (n.renaming.apply(pre) != n.conclusion)
    out.push_back({n.id, "stored conclusion " + n.conclusion.to_string() +
                             " is not the renamed instance of " + pre.to_string()});
  else if (!positional_variant(pre, n.conclusion))
    out.push_back({n.id, "stored conclusion is not a positional variant of " +
                             pre.to_string()});
}

}  // namespace

CheckReport check_derivation(const CrDerivation& d, std::optional<int> sink_opt) {
  CheckReport rep;
  auto flag = [&rep](int id, std::string what) {
    rep.violations.push_back({id, std::move(what)});
  };

  if (d.empty()) {
    rep.ok = true;
    return rep;
  }
  int sink = sink_opt.value_or(static_cast<int>(d.size()) - 1);
  if (sink < 0 || static_cast<size_t>(sink) >= d.size()) {
    flag(sink, "sink id out of range");
    rep.ok = false;
    return rep;
  }

  std::map<Symbol, int> var_owner;
  std::map<int, int> discharge_count;

  for (const CrNode& n : d.nodes()) {
    bool refs_ok = true;
    for (int p : d.premises(n.id))
      if (p < 0 || p >= n.id) {
        flag(n.id, "premise id " + std::to_string(p) +
                       " must name an earlier node");
        refs_ok = false;
      }

    for (const Symbol& v : n.conclusion.vars()) {
      auto [it, fresh] = var_owner.emplace(v, n.id);
      if (!fresh)
        flag(n.id, "variable " + v + " already occurs in node " +
                       std::to_string(it->second));
    }

    if (!refs_ok) continue;
    try {
      switch (n.kind) {
        case RuleKind::Input:
          break;
        case RuleKind::Decision:
          if (!n.conclusion.is_unit())
            flag(n.id, "a decision must conclude a unit");
          break;
        case RuleKind::Upr: {
          const Clause& c = d.node(n.clause_premise).conclusion;
          if (n.units.empty()) {
            flag(n.id, "no unit premises");
            break;
          }
          if (c.size() != n.units.size() + 1 ||
              n.clause_positions.size() != n.units.size()) {
            flag(n.id, "clause premise size does not fit the unit premises");
            break;
          }
          std::vector<bool> taken(c.size(), false);
          bool pos_ok = true;
          for (size_t p : n.clause_positions) {
            if (p >= c.size() || taken[p]) {
              flag(n.id, "invalid clause positions");
              pos_ok = false;
              break;
            }
            taken[p] = true;
          }
          if (!pos_ok) break;
          if (n.propagated_position >= c.size() || taken[n.propagated_position]) {
            flag(n.id, "propagated position is not the leftover literal");
            break;
          }
          bool unifies = true;
          for (size_t k = 0; k < n.units.size(); ++k) {
            Literal a = dual(c.lit(n.clause_positions[k]));
            Literal b = d.unit_of(n.units[k]);
            if (n.sigma.apply(a) != n.sigma.apply(b)) {
              flag(n.id, "sigma does not unify " + a.to_string() + " with " +
                             b.to_string());
              unifies = false;
            }
          }
          if (!unifies) break;
          check_conclusion(n, Clause{n.sigma.apply(c.lit(n.propagated_position))},
                           rep.violations);
          break;
        }
        case RuleKind::Conflict: {
          const Literal& l = d.unit_of(n.left);
          const Literal& r = d.unit_of(n.right);
          if (l.positive() == r.positive()) {
            flag(n.id, "conflict premises must have opposite polarity");
            break;
          }
          Literal la(true, l.pred(), l.args());
          Literal ra(true, r.pred(), r.args());
          if (n.sigma.apply(la) != n.sigma.apply(ra)) {
            flag(n.id, "sigma does not unify the conflicting atoms");
            break;
          }
          if (!n.conclusion.is_contradiction())
            flag(n.id, "a conflict must conclude the contradiction");
          break;
        }
        case RuleKind::ClauseLearn: {
          if (!d.node(n.bottom).conclusion.is_contradiction()) {
            flag(n.id, "learning must start from the contradiction");
            break;
          }
          if (n.discharged.empty()) {
            flag(n.id, "learning must discharge a decision");
            break;
          }
          if (!std::is_sorted(n.discharged.begin(), n.discharged.end()) ||
              std::adjacent_find(n.discharged.begin(), n.discharged.end()) !=
                  n.discharged.end()) {
            flag(n.id, "discharged decisions must be listed once, ascending");
            break;
          }
          if (n.cl_index != static_cast<int>(n.discharged.size()))
            flag(n.id, "learning index does not count the discharged decisions");
          std::set<int> cone = d.ancestor_cone(n.bottom);
          bool dis_ok = true;
          for (int dec : n.discharged) {
            if (d.node(dec).kind != RuleKind::Decision) {
              flag(n.id, "node " + std::to_string(dec) + " is not a decision");
              dis_ok = false;
            } else if (!cone.count(dec)) {
              flag(n.id, "decision " + std::to_string(dec) +
                             " is not an ancestor of the conflict");
              dis_ok = false;
            }
            if (++discharge_count[dec] > 1) {
              flag(n.id, "decision " + std::to_string(dec) +
                             " is discharged more than once");
              dis_ok = false;
            }
          }
          if (!dis_ok) break;
          std::vector<Literal> lits;
          for (int dec : n.discharged) {
            Literal base = dual(d.unit_of(dec));
            std::vector<Literal> seen;
            for (const Substitution& s : d.path_substitutions(dec, n.bottom)) {
              Literal inst = s.apply(base);
              if (std::find(seen.begin(), seen.end(), inst) == seen.end()) {
                seen.push_back(inst);
                lits.push_back(inst);
              }
            }
          }
          check_conclusion(n, Clause(std::move(lits)), rep.violations);
          break;
        }
      }
    } catch (const CrError& e) {
      flag(n.id, e.what());
    }
  }

  // Dominance at the sink: a discharged decision must not reach the sink
  // around its discharging node.
  std::set<int> sink_cone = d.ancestor_cone(sink);
  for (int v : sink_cone) {
    const CrNode& n = d.node(v);
    if (n.kind != RuleKind::Decision || n.discharged_by == -1 ||
        !sink_cone.count(n.discharged_by))
      continue;
    int guard = n.discharged_by;
    std::set<int> visited;
    std::vector<int> stack = {v};
    bool escaped = false;
    while (!stack.empty() && !escaped) {
      int cur = stack.back();
      stack.pop_back();
      if (!visited.insert(cur).second) continue;
      for (int ch : d.children(cur)) {
        if (ch == guard || !sink_cone.count(ch)) continue;
        if (ch == sink) {
          escaped = true;
          break;
        }
        stack.push_back(ch);
      }
    }
    if (v == sink) escaped = true;
    if (escaped)
      flag(v, "a path from this decision to the sink avoids node " +
                  std::to_string(guard) + ", which discharges it");
  }

  rep.ok = rep.violations.empty();
  if (rep.ok) {
    if (d.undischarged(sink).empty())
      rep.classification = d.node(sink).conclusion.is_contradiction()
                               ? DerivationClass::Refutation
                               : DerivationClass::Proof;
    else
      rep.classification = DerivationClass::Derivation;
  }
  return rep;
}

std::string Sequent::to_string() const {
  std::string s;
  for (size_t i = 0; i < antecedent.size(); ++i) {
    if (i) s += ", ";
    s += antecedent[i].second.to_string();
  }
  if (!antecedent.empty()) s += ' ';
  s += "⊢ ";
  s += succedent.is_contradiction() ? "⊥" : succedent.to_string();
  return s;
}

Sequent to_sequent(const CrDerivation& d, int target) {
  d.node(target);
  std::map<int, std::vector<std::pair<int, Literal>>> memo;
  for (int v : d.ancestor_cone(target)) {  // ascending, so premises come first
    const CrNode& n = d.node(v);
    std::vector<std::pair<int, Literal>> ante;
    if (n.kind == RuleKind::Decision) {
      ante.emplace_back(v, d.unit_of(v));
    } else if (n.kind != RuleKind::Input) {
      Substitution contrib = n.contribution();
      std::set<int> dropped(n.discharged.begin(), n.discharged.end());
      for (int p : d.premises(v)) {
        for (const auto& [dec, lit] : memo.at(p)) {
          if (n.kind == RuleKind::ClauseLearn && dropped.count(dec)) continue;
          std::pair<int, Literal> entry(dec, contrib.apply(lit));
          if (std::find(ante.begin(), ante.end(), entry) == ante.end())
            ante.push_back(std::move(entry));
        }
      }
    }
    memo.emplace(v, std::move(ante));
  }
  return Sequent{memo.at(target), d.node(target).conclusion};
}

}  // namespace crkit
