#include "crkit/conflict_graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "crkit/error.hpp"

namespace crkit {

ImplicationGraph graph_from_cr(const CrDerivation& d,
                               std::optional<int> sink) {
  int s = sink.value_or(static_cast<int>(d.size()) - 1);
  if (s < 0 || d.node(s).kind != RuleKind::Conflict)
    throw CrError(Err::no_conflict, "the slice must end in a conflict");
  std::set<int> cone = d.ancestor_cone(s);
  for (int id : cone) {
    RuleKind k = d.node(id).kind;
    if (id != s && (k == RuleKind::Conflict || k == RuleKind::ClauseLearn))
      throw CrError(Err::not_single_conflict,
                    "node " + std::to_string(id) +
                        " is a second conflict or a learned clause; restrict "
                        "the slice first");
  }

  // Which inputs serve as unit premises (vertices) vs clause premises
  // (reason labels)?  A unit input can play both roles.
  std::set<int> unit_role, clause_role;
  for (int id : cone) {
    const CrNode& n = d.node(id);
    if (n.kind == RuleKind::Upr) {
      for (int u : n.units)
        if (d.node(u).kind == RuleKind::Input) unit_role.insert(u);
      if (d.node(n.clause_premise).kind == RuleKind::Input)
        clause_role.insert(n.clause_premise);
    } else if (n.kind == RuleKind::Conflict) {
      for (int u : {n.left, n.right})
        if (d.node(u).kind == RuleKind::Input) unit_role.insert(u);
    }
  }

  ImplicationGraph g;
  std::map<int, int> vtx;       // derivation node -> vertex id
  std::map<int, int> clauseix;  // input node -> clause index
  auto clause_of = [&](int input) {
    auto [it, fresh] = clauseix.emplace(input, static_cast<int>(g.clauses.size()));
    if (fresh) g.clauses.push_back(d.node(input).conclusion);
    return it->second;
  };
  for (int id : cone) {
    const CrNode& n = d.node(id);
    switch (n.kind) {
      case RuleKind::Input:
        if (clause_role.count(id)) clause_of(id);
        if (unit_role.count(id)) {
          GraphVertex v;
          v.id = static_cast<int>(g.vertices.size());
          v.literal = n.conclusion.lit(0);
          v.reason = clause_of(id);
          vtx[id] = v.id;
          g.vertices.push_back(std::move(v));
        }
        break;
      case RuleKind::Decision: {
        GraphVertex v;
        v.id = static_cast<int>(g.vertices.size());
        v.literal = n.conclusion.lit(0);
        v.is_decision = true;
        vtx[id] = v.id;
        g.vertices.push_back(std::move(v));
        break;
      }
      case RuleKind::Upr: {
        GraphVertex v;
        v.id = static_cast<int>(g.vertices.size());
        v.literal = n.conclusion.lit(0);
        v.reason = clause_of(n.clause_premise);
        for (int u : n.units) v.premises.push_back(vtx.at(u));
        vtx[id] = v.id;
        g.vertices.push_back(std::move(v));
        break;
      }
      case RuleKind::Conflict:
        g.conflict_left = vtx.at(n.left);
        g.conflict_right = vtx.at(n.right);
        break;
      case RuleKind::ClauseLearn:
        break;  // excluded above
    }
  }
  return g;
}

namespace {

/// Shape checks shared by every graph consumer: ids match positions,
/// premises point backward, propagations cite an existing reason clause,
/// and the conflict names two vertices.
void validate_graph(const ImplicationGraph& g) {
  for (size_t i = 0; i < g.vertices.size(); ++i) {
    const GraphVertex& v = g.vertices[i];
    if (v.id != static_cast<int>(i))
      throw CrError(Err::dangling_ref, "vertex ids must match their position");
    if (!v.is_decision &&
        (v.reason < 0 || v.reason >= static_cast<int>(g.clauses.size())))
      throw CrError(Err::dangling_ref,
                    "propagated vertex " + v.literal.to_string() +
                        " cites no reason clause");
    for (int p : v.premises)
      if (p < 0 || p >= static_cast<int>(i))
        throw CrError(Err::dangling_ref,
                      "vertex premises must precede the vertex");
  }
  int n = static_cast<int>(g.vertices.size());
  if (g.conflict_left < 0 || g.conflict_left >= n || g.conflict_right < 0 ||
      g.conflict_right >= n)
    throw CrError(Err::no_conflict, "the graph has no conflict pair");
}

}  // namespace

CrDerivation cr_from_graph(const ImplicationGraph& g) {
  validate_graph(g);
  CrDerivation d;
  std::vector<int> cid;
  for (const Clause& c : g.clauses) cid.push_back(d.add_input(c));
  std::map<int, int> vid;
  for (const GraphVertex& v : g.vertices) {
    if (v.is_decision) {
      vid[v.id] = d.decide(v.literal);
    } else if (v.premises.empty()) {
      // Propagated by a unit clause: the input node itself is the unit.
      vid[v.id] = cid.at(static_cast<size_t>(v.reason));
    } else {
      std::vector<int> us;
      for (int p : v.premises) us.push_back(vid.at(p));
      vid[v.id] = d.unit_propagating_resolution(
          us, cid.at(static_cast<size_t>(v.reason)));
    }
  }
  d.conflict(vid.at(g.conflict_left), vid.at(g.conflict_right));
  return d;
}

Clause analyze_decisions(const ImplicationGraph& g) {
  CrDerivation d = cr_from_graph(g);
  int sink = static_cast<int>(d.size()) - 1;
  std::vector<int> open = d.undischarged(sink);
  if (open.empty()) return Clause{};
  int learned = d.clause_learn(sink, open);
  return d.node(learned).conclusion;
}

namespace {

bool ground_literal(const Literal& l) {
  std::set<Symbol> vs;
  l.collect_vars(vs);
  return vs.empty();
}

/// Position of `lit` in `c` (ground graphs: exact match).
size_t position_of(const Clause& c, const Literal& lit) {
  for (size_t p = 0; p < c.size(); ++p)
    if (c.lit(p) == lit) return p;
  throw CrError(Err::bad_position,
                "reason clause " + c.to_string() + " does not contain " +
                    lit.to_string());
}

/// Factors every duplicated literal away, one group at a time.
int factor_all(ResDerivation& r, int node) {
  for (;;) {
    const Clause c = r.node(node).conclusion;
    bool changed = false;
    for (size_t i = 0; i < c.size() && !changed; ++i) {
      std::vector<size_t> grp{i};
      for (size_t j = i + 1; j < c.size(); ++j)
        if (c.lit(j) == c.lit(i)) grp.push_back(j);
      if (grp.size() > 1) {
        node = r.factor(node, grp);
        changed = true;
      }
    }
    if (!changed) return node;
  }
}

}  // namespace

ResDerivation graph_to_resolution(const ImplicationGraph& g) {
  validate_graph(g);
  for (const GraphVertex& v : g.vertices)
    if (!ground_literal(v.literal))
      throw CrError(Err::not_ground,
                    "vertex " + v.literal.to_string() + " is not ground");
  for (const Clause& c : g.clauses)
    if (!c.ground())
      throw CrError(Err::not_ground,
                    "reason clause " + c.to_string() + " is not ground");

  const GraphVertex& L = g.vertices[static_cast<size_t>(g.conflict_left)];
  const GraphVertex& R = g.vertices[static_cast<size_t>(g.conflict_right)];
  if (L.is_decision && R.is_decision)
    throw CrError(Err::bad_rule,
                  "a conflict between two decisions cites no clause");

  ResDerivation r;
  std::vector<int> cid;
  for (const Clause& c : g.clauses) cid.push_back(r.add_input(c));

  int cur;
  if (!L.is_decision && !R.is_decision) {
    const Clause& lc = g.clauses[static_cast<size_t>(L.reason)];
    const Clause& rc = g.clauses[static_cast<size_t>(R.reason)];
    cur = r.resolve(cid[static_cast<size_t>(L.reason)],
                    cid[static_cast<size_t>(R.reason)],
                    position_of(lc, L.literal), position_of(rc, R.literal));
  } else {
    // One side was decided: its dual already sits in the other reason.
    cur = cid[static_cast<size_t>((L.is_decision ? R : L).reason)];
  }
  cur = factor_all(r, cur);

  for (auto it = g.vertices.rbegin(); it != g.vertices.rend(); ++it) {
    const GraphVertex& v = *it;
    if (v.is_decision) continue;
    const Clause cc = r.node(cur).conclusion;
    Literal want = dual(v.literal);
    for (size_t p = 0; p < cc.size(); ++p) {
      if (cc.lit(p) != want) continue;
      const Clause& reason = g.clauses[static_cast<size_t>(v.reason)];
      cur = r.resolve(cur, cid[static_cast<size_t>(v.reason)], p,
                      position_of(reason, v.literal));
      cur = factor_all(r, cur);
      break;  // eager factoring leaves at most one copy
    }
  }
  return r;
}

bool isomorphic(const ImplicationGraph& a, const ImplicationGraph& b) {
  if (a.vertices.size() != b.vertices.size() ||
      a.clauses.size() != b.clauses.size() ||
      a.conflict_left != b.conflict_left ||
      a.conflict_right != b.conflict_right)
    return false;
  for (size_t i = 0; i < a.vertices.size(); ++i) {
    const GraphVertex& va = a.vertices[i];
    const GraphVertex& vb = b.vertices[i];
    if (va.is_decision != vb.is_decision || va.reason != vb.reason ||
        va.premises != vb.premises)
      return false;
  }
  // One consistent renaming across every literal and clause, checked by
  // lining them all up positionally.
  std::vector<Literal> la, lb;
  for (const GraphVertex& v : a.vertices) la.push_back(v.literal);
  for (const GraphVertex& v : b.vertices) lb.push_back(v.literal);
  for (const Clause& c : a.clauses)
    for (const Literal& l : c.literals()) la.push_back(l);
  for (const Clause& c : b.clauses)
    for (const Literal& l : c.literals()) lb.push_back(l);
  if (la.size() != lb.size()) return false;
  return positional_variant_map(Clause(la), Clause(lb)).has_value();
}

}  // namespace crkit
