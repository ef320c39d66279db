#include "crkit/cnd.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "crkit/unify.hpp"

namespace crkit {

std::string rule_name(CndRule k) {
  switch (k) {
    case CndRule::Axiom: return "axiom";
    case CndRule::Assumption: return "assume";
    case CndRule::ImpElim: return "imp-elim";
    case CndRule::NegElim: return "neg-elim";
    case CndRule::NegIntro: return "neg-intro";
    case CndRule::ImpIntro: return "imp-intro";
    case CndRule::AllElim: return "all-elim";
    case CndRule::AllIntro: return "all-intro";
  }
  return "?";
}

namespace {

/** Variables occurring anywhere in the literal multiset. */
std::set<Symbol> assumption_vars(const std::vector<Literal>& open) {
  std::set<Symbol> vs;
  for (const Literal& l : open) l.collect_vars(vs);
  return vs;
}

/** First position of `l` in `c`, or c.size() when absent. */
size_t find_lit(const Clause& c, const Literal& l) {
  for (size_t i = 0; i < c.size(); ++i)
    if (c.lit(i) == l) return i;
  return c.size();
}

Clause erase_position(const Clause& c, size_t at) {
  std::vector<Literal> rest;
  for (size_t i = 0; i < c.size(); ++i)
    if (i != at) rest.push_back(c.lit(i));
  return Clause(std::move(rest));
}

Clause prepend(const Literal& l, const Clause& c) {
  std::vector<Literal> lits{l};
  lits.insert(lits.end(), c.literals().begin(), c.literals().end());
  return Clause(std::move(lits));
}

}  // namespace

int CndDerivation::append(CndNode n, std::vector<Literal> open) {
  n.id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(n));
  open_.push_back(std::move(open));
  return nodes_.back().id;
}

std::vector<Literal> CndDerivation::merged_open(
    const std::vector<int>& premises) const {
  std::vector<Literal> out;
  for (int p : premises) {
    const std::vector<Literal>& add = open_assumptions(p);
    std::vector<Literal> merged;
    merged.reserve(out.size() + add.size());
    std::merge(out.begin(), out.end(), add.begin(), add.end(),
               std::back_inserter(merged));
    out = std::move(merged);
  }
  return out;
}

std::vector<Literal> CndDerivation::discharged_from(std::vector<Literal> open,
                                                    const Literal& a) {
  open.erase(std::remove(open.begin(), open.end(), a), open.end());
  return open;
}

int CndDerivation::axiom(const Clause& c) {
  CndNode n;
  n.rule = CndRule::Axiom;
  n.conclusion = c;
  return append(std::move(n), {});
}

int CndDerivation::assume(const Literal& l) {
  if (l.is_prop_const())
    throw CrError(Err::top_bottom_literal,
                  "a propositional constant cannot be assumed");
  CndNode n;
  n.rule = CndRule::Assumption;
  n.conclusion = Clause{l};
  n.assumption = l;
  return append(std::move(n), {l});
}

int CndDerivation::imp_elim(int unit, int clause) {
  const CndNode& un = node(unit);
  const CndNode& cn = node(clause);
  if (!un.conclusion.is_unit())
    throw CrError(Err::not_unit, "node " + std::to_string(unit) +
                                     " does not conclude a unit");
  if (cn.conclusion.size() < 2)
    throw CrError(Err::bad_rule,
                  "the clause premise needs at least two literals");
  Literal wanted = dual(un.conclusion.lit(0));
  size_t at = find_lit(cn.conclusion, wanted);
  if (at == cn.conclusion.size())
    throw CrError(Err::no_association, "clause premise has no occurrence of " +
                                           wanted.to_string());
  CndNode n;
  n.rule = CndRule::ImpElim;
  n.conclusion = erase_position(cn.conclusion, at);
  n.premises = {unit, clause};
  return append(std::move(n), merged_open(n.premises));
}

int CndDerivation::neg_elim(int left, int right) {
  const CndNode& ln = node(left);
  const CndNode& rn = node(right);
  if (!ln.conclusion.is_unit() || !rn.conclusion.is_unit())
    throw CrError(Err::not_unit, "negation elimination needs two units");
  if (dual(ln.conclusion.lit(0)) != rn.conclusion.lit(0))
    throw CrError(Err::same_polarity,
                  ln.conclusion.lit(0).to_string() + " and " +
                      rn.conclusion.lit(0).to_string() +
                      " are not complementary as written");
  CndNode n;
  n.rule = CndRule::NegElim;
  n.conclusion = Clause{};
  n.premises = {left, right};
  return append(std::move(n), merged_open(n.premises));
}

int CndDerivation::neg_intro(int body, const Literal& assumption) {
  const CndNode& bn = node(body);
  if (assumption.is_prop_const())
    throw CrError(Err::top_bottom_literal,
                  "a propositional constant cannot be discharged");
  if (!bn.conclusion.is_contradiction())
    throw CrError(Err::not_bottom,
                  "negation introduction needs a refuted body");
  CndNode n;
  n.rule = CndRule::NegIntro;
  n.conclusion = Clause{dual(assumption)};
  n.premises = {body};
  n.assumption = assumption;
  return append(std::move(n),
                discharged_from(open_assumptions(body), assumption));
}

int CndDerivation::imp_intro(int body, const Literal& assumption) {
  const CndNode& bn = node(body);
  if (assumption.is_prop_const())
    throw CrError(Err::top_bottom_literal,
                  "a propositional constant cannot be discharged");
  if (bn.conclusion.is_contradiction())
    throw CrError(Err::not_bottom,
                  "a refuted body takes negation introduction instead");
  CndNode n;
  n.rule = CndRule::ImpIntro;
  n.conclusion = prepend(dual(assumption), bn.conclusion);
  n.premises = {body};
  n.assumption = assumption;
  return append(std::move(n),
                discharged_from(open_assumptions(body), assumption));
}

int CndDerivation::all_elim(int body, const Substitution& s) {
  const CndNode& bn = node(body);
  std::set<Symbol> blocked = assumption_vars(open_assumptions(body));
  for (const Symbol& v : s.domain())
    if (blocked.count(v))
      throw CrError(Err::bad_rule, "variable " + v +
                                       " is free in an open assumption");
  CndNode n;
  n.rule = CndRule::AllElim;
  n.conclusion = s.apply(bn.conclusion);
  n.premises = {body};
  n.sigma = s;
  return append(std::move(n), open_assumptions(body));
}

int CndDerivation::all_intro(int body, const Substitution& r) {
  const CndNode& bn = node(body);
  if (!r.is_renaming())
    throw CrError(Err::bad_rule, "not an injective variable renaming");
  std::set<Symbol> blocked = assumption_vars(open_assumptions(body));
  std::set<Symbol> kept = bn.conclusion.vars();
  for (const auto& [v, t] : r.bindings()) {
    if (blocked.count(v))
      throw CrError(Err::bad_rule, "variable " + v +
                                       " is free in an open assumption");
    kept.erase(v);
  }
  for (const auto& [v, t] : r.bindings())
    if (kept.count(t.symbol()))
      throw CrError(Err::bad_rule, "renaming onto " + t.symbol() +
                                       " captures a clause variable");
  CndNode n;
  n.rule = CndRule::AllIntro;
  n.conclusion = r.apply(bn.conclusion);
  n.premises = {body};
  n.sigma = r;
  return append(std::move(n), open_assumptions(body));
}

const CndNode& CndDerivation::node(int id) const {
  if (id < 0 || static_cast<size_t>(id) >= nodes_.size())
    throw CrError(Err::dangling_ref, "no node with id " + std::to_string(id));
  return nodes_[static_cast<size_t>(id)];
}

const std::vector<Literal>& CndDerivation::open_assumptions(int id) const {
  node(id);
  return open_[static_cast<size_t>(id)];
}

std::map<CndRule, int> CndDerivation::rule_counts() const {
  std::map<CndRule, int> out;
  for (const CndNode& n : nodes_) ++out[n.rule];
  return out;
}

CndDerivation CndDerivation::from_nodes(std::vector<CndNode> nodes) {
  CndDerivation d;
  for (size_t i = 0; i < nodes.size(); ++i) {
    CndNode& n = nodes[i];
    for (int p : n.premises)
      if (p < 0 || static_cast<size_t>(p) >= i)
        throw CrError(Err::dangling_ref,
                      "node " + std::to_string(i) +
                          " references premise " + std::to_string(p));
    std::vector<Literal> open;
    switch (n.rule) {
      case CndRule::Axiom:
        break;
      case CndRule::Assumption:
        open = {n.assumption};
        break;
      case CndRule::NegIntro:
      case CndRule::ImpIntro:
        open = n.premises.empty()
                   ? std::vector<Literal>{}
                   : discharged_from(d.open_assumptions(n.premises[0]),
                                     n.assumption);
        break;
      default:
        open = d.merged_open(n.premises);
        break;
    }
    n.id = static_cast<int>(i);
    d.nodes_.push_back(std::move(n));
    d.open_.push_back(std::move(open));
  }
  return d;
}

CheckReport check_cnd(const CndDerivation& d, std::optional<int> sink_opt) {
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

  for (const CndNode& n : d.nodes()) {
    size_t want = 0;
    switch (n.rule) {
      case CndRule::Axiom:
      case CndRule::Assumption: want = 0; break;
      case CndRule::ImpElim:
      case CndRule::NegElim: want = 2; break;
      default: want = 1; break;
    }
    bool refs_ok = n.premises.size() == want;
    for (int p : n.premises)
      if (p < 0 || p >= n.id) refs_ok = false;
    if (!refs_ok) {
      flag(n.id, "malformed premise list for " + rule_name(n.rule));
      continue;
    }

    switch (n.rule) {
      case CndRule::Axiom:
        break;
      case CndRule::Assumption:
        if (n.assumption.is_prop_const())
          flag(n.id, "assumed a propositional constant");
        else if (n.conclusion != Clause{n.assumption})
          flag(n.id, "conclusion is not the assumed literal");
        break;
      case CndRule::ImpElim: {
        const Clause& uc = d.node(n.premises[0]).conclusion;
        const Clause& cc = d.node(n.premises[1]).conclusion;
        if (!uc.is_unit()) { flag(n.id, "first premise is not a unit"); break; }
        if (cc.size() < 2) { flag(n.id, "second premise is not a clause of two or more literals"); break; }
        size_t at = find_lit(cc, dual(uc.lit(0)));
        if (at == cc.size()) { flag(n.id, "clause premise lacks the dual of the unit"); break; }
        if (n.conclusion != erase_position(cc, at))
          flag(n.id, "conclusion is not the clause minus the matched occurrence");
        break;
      }
      case CndRule::NegElim: {
        const Clause& lc = d.node(n.premises[0]).conclusion;
        const Clause& rc = d.node(n.premises[1]).conclusion;
        if (!lc.is_unit() || !rc.is_unit()) { flag(n.id, "premises are not units"); break; }
        if (dual(lc.lit(0)) != rc.lit(0)) { flag(n.id, "premises are not complementary as written"); break; }
        if (!n.conclusion.is_contradiction())
          flag(n.id, "conclusion is not the contradiction");
        break;
      }
      case CndRule::NegIntro: {
        const Clause& bc = d.node(n.premises[0]).conclusion;
        if (n.assumption.is_prop_const()) { flag(n.id, "discharged a propositional constant"); break; }
        if (!bc.is_contradiction()) { flag(n.id, "body is not refuted"); break; }
        if (n.conclusion != Clause{dual(n.assumption)})
          flag(n.id, "conclusion is not the dual of the discharged literal");
        break;
      }
      case CndRule::ImpIntro: {
        const Clause& bc = d.node(n.premises[0]).conclusion;
        if (n.assumption.is_prop_const()) { flag(n.id, "discharged a propositional constant"); break; }
        if (bc.is_contradiction()) { flag(n.id, "refuted body belongs to negation introduction"); break; }
        if (n.conclusion != prepend(dual(n.assumption), bc))
          flag(n.id, "conclusion does not prepend the dual of the discharged literal");
        break;
      }
      case CndRule::AllElim: {
        const Clause& bc = d.node(n.premises[0]).conclusion;
        std::set<Symbol> blocked =
            assumption_vars(d.open_assumptions(n.premises[0]));
        bool bad = false;
        for (const Symbol& v : n.sigma.domain())
          if (blocked.count(v)) {
            flag(n.id, "instantiates " + v + ", free in an open assumption");
            bad = true;
          }
        if (!bad && n.conclusion != n.sigma.apply(bc))
          flag(n.id, "conclusion is not the instantiated body");
        break;
      }
      case CndRule::AllIntro: {
        const Clause& bc = d.node(n.premises[0]).conclusion;
        if (!n.sigma.is_renaming()) { flag(n.id, "not an injective variable renaming"); break; }
        std::set<Symbol> blocked =
            assumption_vars(d.open_assumptions(n.premises[0]));
        std::set<Symbol> kept = bc.vars();
        bool bad = false;
        for (const auto& [v, t] : n.sigma.bindings()) {
          if (blocked.count(v)) {
            flag(n.id, "renames " + v + ", free in an open assumption");
            bad = true;
          }
          kept.erase(v);
        }
        for (const auto& [v, t] : n.sigma.bindings())
          if (kept.count(t.symbol())) {
            flag(n.id, "renaming onto " + t.symbol() + " captures a clause variable");
            bad = true;
          }
        if (!bad && n.conclusion != n.sigma.apply(bc))
          flag(n.id, "conclusion is not the renamed body");
        break;
      }
    }
  }

  rep.ok = rep.violations.empty();
  if (rep.ok && d.open_assumptions(sink).empty()) {
    rep.classification = d.node(sink).conclusion.is_contradiction()
                             ? DerivationClass::Refutation
                             : DerivationClass::Proof;
  }
  return rep;
}

Substitution global_substitution(const CrDerivation& d,
                                 const std::vector<int>& path) {
  if (path.empty())
    throw CrError(Err::bad_rule, "empty path");
  d.node(path.front());
  Substitution acc;
  for (size_t i = 1; i < path.size(); ++i) {
    std::vector<int> prev = d.premises(path[i]);
    if (std::find(prev.begin(), prev.end(), path[i - 1]) == prev.end())
      throw CrError(Err::not_ancestor,
                    "node " + std::to_string(path[i - 1]) +
                        " is not a premise of " + std::to_string(path[i]));
    acc = Substitution::compose(acc, d.node(path[i]).contribution());
  }
  return acc;
}

CrDerivation expand_to_tree(const CrDerivation& d,
                            std::optional<int> sink_opt) {
  if (d.empty()) throw CrError(Err::dangling_ref, "empty derivation");
  int sink = sink_opt.value_or(static_cast<int>(d.size()) - 1);
  d.node(sink);

  CrDerivation out;
  // Copies made of each original decision, in creation order. A learning
  // step consumes the copies its subtree created; an original decision is
  // discharged by one node, so those segments never interleave.
  std::map<int, std::vector<int>> copies;

  std::function<int(int)> build = [&](int v) -> int {
    const CrNode& n = d.node(v);
    switch (n.kind) {
      case RuleKind::Input:
        return out.add_input(n.conclusion);
      case RuleKind::Decision: {
        int c = out.decide(d.unit_of(v));
        copies[v].push_back(c);
        return c;
      }
      case RuleKind::Upr: {
        std::vector<int> us;
        us.reserve(n.units.size());
        for (int u : n.units) us.push_back(build(u));
        int cp = build(n.clause_premise);
        return out.unit_propagating_resolution(us, cp, n.clause_positions);
      }
      case RuleKind::Conflict: {
        int l = build(n.left);
        int r = build(n.right);
        return out.conflict(l, r);
      }
      case RuleKind::ClauseLearn: {
        std::map<int, size_t> before;
        for (int dd : n.discharged) before[dd] = copies[dd].size();
        int b = build(n.bottom);

        std::vector<int> discharge;
        std::map<int, int> source;  // copy id -> original decision
        for (int dd : n.discharged)
          for (size_t k = before[dd]; k < copies[dd].size(); ++k) {
            discharge.push_back(copies[dd][k]);
            source[copies[dd][k]] = dd;
          }
        int cl = out.clause_learn(b, discharge);

        // In the unfolded form each copy reaches the conflict along one
        // path, so the learned clause holds one disjunct per copy, in
        // ascending copy order. Merge back, per original decision, the
        // disjuncts whose instances coincide.
        std::sort(discharge.begin(), discharge.end());
        const Clause wide = out.node(cl).conclusion;
        std::vector<std::pair<int, Literal>> keys;
        std::vector<std::vector<size_t>> groups;
        for (size_t p = 0; p < wide.size(); ++p) {
          std::pair<int, Literal> key{source.at(discharge[p]), wide.lit(p)};
          size_t gi = 0;
          for (; gi < keys.size(); ++gi)
            if (keys[gi].first == key.first && keys[gi].second == key.second)
              break;
          if (gi == keys.size()) {
            keys.push_back(key);
            groups.emplace_back();
          }
          groups[gi].push_back(p);
        }

        int cur = cl;
        std::vector<size_t> where(wide.size());
        std::iota(where.begin(), where.end(), size_t{0});
        std::vector<bool> alive(wide.size(), true);
        for (const std::vector<size_t>& g : groups) {
          if (g.size() < 2) continue;
          std::vector<size_t> ps;
          ps.reserve(g.size());
          for (size_t i : g) ps.push_back(where[i]);
          cur = out.factoring(cur, ps);
          for (size_t k = 1; k < g.size(); ++k) alive[g[k]] = false;
          size_t next = 0;
          for (size_t i = 0; i < wide.size(); ++i)
            if (alive[i]) where[i] = next++;
        }
        if (!variant(out.node(cur).conclusion, n.conclusion))
          throw CrError(Err::not_tree,
                        "unfolding cannot restore the merged conclusion of "
                        "node " + std::to_string(v));
        return cur;
      }
    }
    throw CrError(Err::bad_rule, "unknown rule");
  };

  build(sink);
  return out;
}

CndDerivation cr_to_cnd(const CrDerivation& d, std::optional<int> sink_opt) {
  if (d.empty()) throw CrError(Err::dangling_ref, "empty derivation");
  int sink = sink_opt.value_or(static_cast<int>(d.size()) - 1);
  d.node(sink);

  CndDerivation nd;
  // acc instantiates this copy of the node: the composition of the
  // contributions of everything below it in the unfolded tree.
  std::function<int(int, const Substitution&)> tr =
      [&](int v, const Substitution& acc) -> int {
    const CrNode& n = d.node(v);
    switch (n.kind) {
      case RuleKind::Input: {
        int ax = nd.axiom(n.conclusion);
        Substitution inst = acc.restricted(n.conclusion.vars());
        return inst.empty() ? ax : nd.all_elim(ax, inst);
      }
      case RuleKind::Decision:
        return nd.assume(acc.apply(d.unit_of(v)));
      case RuleKind::Upr: {
        Substitution sub = Substitution::compose(n.contribution(), acc);
        int cur = tr(n.clause_premise, sub);
        for (int u : n.units) cur = nd.imp_elim(tr(u, sub), cur);
        return cur;
      }
      case RuleKind::Conflict: {
        Substitution sub = Substitution::compose(n.contribution(), acc);
        int l = tr(n.left, sub);
        int r = tr(n.right, sub);
        return nd.neg_elim(l, r);
      }
      case RuleKind::ClauseLearn: {
        Substitution sub = Substitution::compose(n.contribution(), acc);
        int cur = tr(n.bottom, sub);
        Clause learned = acc.apply(n.conclusion);
        for (size_t j = learned.size(); j-- > 0;) {
          Literal a = dual(learned.lit(j));
          cur = (j + 1 == learned.size()) ? nd.neg_intro(cur, a)
                                          : nd.imp_intro(cur, a);
        }
        return cur;
      }
    }
    throw CrError(Err::bad_rule, "unknown rule");
  };

  tr(sink, Substitution());
  return nd;
}

}  // namespace crkit
