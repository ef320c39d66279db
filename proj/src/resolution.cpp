#include "crkit/resolution.hpp"

#include <algorithm>

#include "crkit/error.hpp"
#include "crkit/unify.hpp"

namespace crkit {

std::string res_rule_name(ResKind k) {
  switch (k) {
    case ResKind::Input: return "input";
    case ResKind::Resolution: return "resolve";
    case ResKind::Factoring: return "factor";
  }
  return "?";
}

const ResNode& ResDerivation::node(int id) const {
  if (id < 0 || static_cast<size_t>(id) >= nodes_.size())
    throw CrError(Err::dangling_ref, "no node with id " + std::to_string(id));
  return nodes_[static_cast<size_t>(id)];
}

int ResDerivation::append(ResNode n, const Clause& pre_renaming) {
  auto [renamed, rho] = rename_apart(pre_renaming, used_vars_);
  n.conclusion = renamed;
  n.renaming = rho;
  n.id = static_cast<int>(nodes_.size());
  for (const Symbol& v : renamed.vars()) used_vars_.insert(v);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

int ResDerivation::add_input(const Clause& c) {
  ResNode n;
  n.kind = ResKind::Input;
  return append(std::move(n), c);
}

int ResDerivation::resolve(int left, int right, size_t left_pos,
                           size_t right_pos) {
  const Clause& lc = node(left).conclusion;
  const Clause& rc = node(right).conclusion;
  if (left_pos >= lc.size() || right_pos >= rc.size())
    throw CrError(Err::bad_position, "resolved positions out of range");
  const Literal& ll = lc.lit(left_pos);
  const Literal& rl = rc.lit(right_pos);
  if (ll.is_prop_const() || rl.is_prop_const())
    throw CrError(Err::top_bottom_literal, "cannot resolve on " + ll.to_string());
  if (ll.positive() == rl.positive())
    throw CrError(Err::same_polarity, ll.to_string() + " and " + rl.to_string() +
                                          " have the same polarity");
  UnifyResult r = unify({{ll, dual(rl)}});
  if (!r)
    throw CrError(r.fail == UnifyFail::occurs_check ? Err::occurs_check
                                                    : Err::not_unifiable,
                  ll.to_string() + " does not clash with " + rl.to_string());

  std::vector<Literal> lits;
  for (size_t i = 0; i < lc.size(); ++i)
    if (i != left_pos) lits.push_back(r.mgu->apply(lc.lit(i)));
  for (size_t i = 0; i < rc.size(); ++i)
    if (i != right_pos) lits.push_back(r.mgu->apply(rc.lit(i)));

  ResNode n;
  n.kind = ResKind::Resolution;
  n.left = left;
  n.right = right;
  n.left_pos = left_pos;
  n.right_pos = right_pos;
  n.sigma = *r.mgu;
  return append(std::move(n), Clause(std::move(lits)));
}

int ResDerivation::factor(int premise, std::vector<size_t> group) {
  const Clause& c = node(premise).conclusion;
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
  UnifyResult r = unify(pairs);
  if (!r)
    throw CrError(r.fail == UnifyFail::occurs_check ? Err::occurs_check
                                                    : Err::not_unifiable,
                  "grouped literals do not unify");

  std::vector<Literal> lits;
  for (size_t i = 0; i < c.size(); ++i) {
    if (i != group[0] &&
        std::find(group.begin(), group.end(), i) != group.end())
      continue;
    lits.push_back(r.mgu->apply(c.lit(i)));
  }

  ResNode n;
  n.kind = ResKind::Factoring;
  n.premise = premise;
  n.group = std::move(group);
  n.sigma = *r.mgu;
  return append(std::move(n), Clause(std::move(lits)));
}

std::vector<int> ResDerivation::premises(int id) const {
  const ResNode& n = node(id);
  switch (n.kind) {
    case ResKind::Resolution: return {n.left, n.right};
    case ResKind::Factoring: return {n.premise};
    default: return {};
  }
}

std::set<int> ResDerivation::ancestor_cone(int id) const {
  node(id);
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

ResDerivation ResDerivation::from_nodes(std::vector<ResNode> nodes) {
  ResDerivation d;
  for (size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].id = static_cast<int>(i);
    for (const Symbol& v : nodes[i].conclusion.vars()) d.used_vars_.insert(v);
  }
  d.nodes_ = std::move(nodes);
  return d;
}

namespace {

void check_res_conclusion(const ResNode& n, const Clause& pre,
                          std::vector<CheckViolation>& out) {
  if (n.renaming.apply(pre) != n.conclusion)
    out.push_back({n.id, "stored conclusion " + n.conclusion.to_string() +
                             " is not the renamed instance of " + pre.to_string()});
  else if (!positional_variant(pre, n.conclusion))
    out.push_back({n.id, "stored conclusion is not a positional variant of " +
                             pre.to_string()});
}

}  // namespace

CheckReport check_resolution(const ResDerivation& d, std::optional<int> sink_opt) {
  CheckReport rep;
  auto flag = [&rep](int id, std::string what) {
    rep.violations.push_back({id, std::move(what)});
  };
  if (d.empty()) return rep;
  int sink = sink_opt.value_or(static_cast<int>(d.size()) - 1);
  if (sink < 0 || static_cast<size_t>(sink) >= d.size()) {
    flag(sink, "sink id out of range");
    rep.ok = false;
    return rep;
  }

  std::map<Symbol, int> var_owner;
  for (const ResNode& n : d.nodes()) {
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
        case ResKind::Input:
          break;
        case ResKind::Resolution: {
          const Clause& lc = d.node(n.left).conclusion;
          const Clause& rc = d.node(n.right).conclusion;
          if (n.left_pos >= lc.size() || n.right_pos >= rc.size()) {
            flag(n.id, "resolved positions out of range");
            break;
          }
          const Literal& ll = lc.lit(n.left_pos);
          const Literal& rl = rc.lit(n.right_pos);
          if (ll.is_prop_const() || rl.is_prop_const() ||
              ll.positive() == rl.positive() || ll.pred() != rl.pred()) {
            flag(n.id, "resolved literals do not clash");
            break;
          }
          if (n.sigma.apply(ll) != n.sigma.apply(dual(rl))) {
            flag(n.id, "sigma does not unify the resolved literals");
            break;
          }
          std::vector<Literal> lits;
          for (size_t i = 0; i < lc.size(); ++i)
            if (i != n.left_pos) lits.push_back(n.sigma.apply(lc.lit(i)));
          for (size_t i = 0; i < rc.size(); ++i)
            if (i != n.right_pos) lits.push_back(n.sigma.apply(rc.lit(i)));
          check_res_conclusion(n, Clause(std::move(lits)), rep.violations);
          break;
        }
        case ResKind::Factoring: {
          const Clause& c = d.node(n.premise).conclusion;
          if (n.group.size() < 2 ||
              !std::is_sorted(n.group.begin(), n.group.end()) ||
              std::adjacent_find(n.group.begin(), n.group.end()) !=
                  n.group.end()) {
            flag(n.id, "factoring group must list two or more positions once, "
                       "ascending");
            break;
          }
          bool pos_ok = true;
          for (size_t g : n.group)
            if (g >= c.size()) {
              flag(n.id, "factoring position out of range");
              pos_ok = false;
            }
          if (!pos_ok) break;
          bool agrees = true;
          for (size_t k = 1; k < n.group.size(); ++k)
            if (n.sigma.apply(c.lit(n.group[0])) !=
                n.sigma.apply(c.lit(n.group[k]))) {
              flag(n.id, "sigma does not equalize the group");
              agrees = false;
            }
          if (!agrees) break;
          std::vector<Literal> lits;
          for (size_t i = 0; i < c.size(); ++i) {
            if (i != n.group[0] &&
                std::find(n.group.begin(), n.group.end(), i) != n.group.end())
              continue;
            lits.push_back(n.sigma.apply(c.lit(i)));
          }
          check_res_conclusion(n, Clause(std::move(lits)), rep.violations);
          break;
        }
      }
    } catch (const CrError& e) {
      flag(n.id, e.what());
    }
  }

  rep.ok = rep.violations.empty();
  if (rep.ok)
    rep.classification = d.node(sink).conclusion.is_contradiction()
                             ? DerivationClass::Refutation
                             : DerivationClass::Derivation;
  return rep;
}

}  // namespace crkit
