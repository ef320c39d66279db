#include "crkit/transformers.hpp"

#include <algorithm>
#include <numeric>

#include "crkit/error.hpp"

namespace crkit {

ResolutionTranslation resolution_to_cr(const ResDerivation& res) {
  ResolutionTranslation t;
  for (int id = 0; id < static_cast<int>(res.size()); ++id) {
    const ResNode& n = res.node(id);
    switch (n.kind) {
      case ResKind::Input:
        t.image[id] = t.cr.add_input(n.conclusion);
        break;
      case ResKind::Factoring: {
        // The factoring macro keeps the clause's literal order, so position
        // references of later steps carry over unchanged.
        int learned = t.cr.factoring(t.image.at(n.premise), n.group);
        t.image[id] = learned;
        t.factoring_learns.push_back(learned);
        break;
      }
      case ResKind::Resolution: {
        int li = t.image.at(n.left);
        int ri = t.image.at(n.right);
        const Clause lc = t.cr.node(li).conclusion;
        const Clause rc = t.cr.node(ri).conclusion;
        // Decide the dual of every side literal, in premise order, then
        // propagate each premise down to its clashing literal.  A unit
        // premise already is its clashing literal and feeds the conflict
        // directly.
        std::vector<int> ldec, rdec;
        std::vector<size_t> lpos, rpos;
        for (size_t p = 0; p < lc.size(); ++p)
          if (p != n.left_pos) {
            ldec.push_back(t.cr.decide(dual(lc.lit(p))));
            lpos.push_back(p);
          }
        for (size_t p = 0; p < rc.size(); ++p)
          if (p != n.right_pos) {
            rdec.push_back(t.cr.decide(dual(rc.lit(p))));
            rpos.push_back(p);
          }
        int lside = ldec.empty()
                        ? li
                        : t.cr.unit_propagating_resolution(ldec, li, lpos);
        int rside = rdec.empty()
                        ? ri
                        : t.cr.unit_propagating_resolution(rdec, ri, rpos);
        int x = t.cr.conflict(lside, rside);
        if (ldec.empty() && rdec.empty()) {
          // Unit against unit: the conflict itself concludes the resolvent.
          t.unit_conflicts.push_back(x);
          t.image[id] = x;
        } else {
          std::vector<int> all = ldec;
          all.insert(all.end(), rdec.begin(), rdec.end());
          int learned = t.cr.clause_learn(x, all);
          t.gadget_conflicts.push_back(x);
          t.gadget_learns.push_back(learned);
          t.image[id] = learned;
        }
        break;
      }
    }
  }
  return t;
}

SimulationMetrics simulation_metrics(const ResolutionTranslation& t) {
  SimulationMetrics m;
  for (int id = 0; id < static_cast<int>(t.cr.size()); ++id)
    if (t.cr.node(id).kind == RuleKind::Input) ++m.inputs;
  // Every gadget ends in an internal conflict, so only the final node tells
  // whether a refutation was translated: it must be the undischarged-free
  // image of the closing unit-unit clash.
  int last = static_cast<int>(t.cr.size()) - 1;
  if (last < 0 || !t.cr.node(last).conclusion.is_contradiction() ||
      !t.cr.undischarged(last).empty())
    throw CrError(Err::not_refutation,
                  "simulation metrics are defined for translated refutations");
  if (t.gadget_learns.size() != t.gadget_conflicts.size())
    throw CrError(Err::metric_mismatch,
                  "every simulated resolution must record one learned clause "
                  "and one conflict");
  m.resolutions = static_cast<int>(t.gadget_learns.size());
  m.factorings = static_cast<int>(t.factoring_learns.size());
  m.unit_conflicts = static_cast<int>(t.unit_conflicts.size());
  m.length_cr = static_cast<int>(t.gadget_learns.size() +
                                 t.gadget_conflicts.size()) +
                m.factorings + 2;
  if (m.length_cr != 2 * m.resolutions + m.factorings + 2)
    throw CrError(Err::metric_mismatch, "translation length must be 2n+m+2");
  m.size_cr = static_cast<int>(t.cr.size());
  m.size_estimate = 2 * m.inputs + 3 * m.resolutions + m.factorings;
  return m;
}

std::vector<std::vector<size_t>> split_positions(const Clause& c) {
  size_t n = c.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto find = [&](size_t p) {
    while (parent[p] != p) p = parent[p] = parent[parent[p]];
    return p;
  };
  std::map<Symbol, size_t> owner;
  for (size_t p = 0; p < n; ++p) {
    std::set<Symbol> vs;
    c.lit(p).collect_vars(vs);
    for (const Symbol& v : vs) {
      auto [it, fresh] = owner.emplace(v, p);
      if (!fresh) parent[find(p)] = find(it->second);
    }
  }
  std::vector<std::vector<size_t>> out;
  std::map<size_t, size_t> index;
  for (size_t p = 0; p < n; ++p) {
    size_t r = find(p);
    auto [it, fresh] = index.emplace(r, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(p);
  }
  return out;
}

std::vector<Clause> split_components(const Clause& c) {
  std::vector<Clause> out;
  for (const auto& group : split_positions(c)) {
    std::vector<Literal> lits;
    for (size_t p : group) lits.push_back(c.lit(p));
    out.push_back(Clause(lits));
  }
  return out;
}

namespace {

/// Matches a part's input clause against the problem: its own component
/// first, then the shared side clauses.  Matching is positional so that the
/// part's clause positions stay valid against the shared image.
int match_input(const Clause& concl, const Clause& component, int source,
                const std::vector<Clause>& base,
                const std::vector<int>& base_ids) {
  if (positional_variant(concl, component)) return source;
  for (size_t b = 0; b < base.size(); ++b)
    if (positional_variant(concl, base[b])) return base_ids[b];
  throw CrError(Err::not_disjoint,
                "part input is neither its component nor a side clause: " +
                    concl.to_string());
}

}  // namespace

CrDerivation combine_split_refutations(const std::vector<Clause>& base,
                                       const Clause& long_clause,
                                       const std::vector<CrDerivation>& parts) {
  std::vector<std::vector<size_t>> groups = split_positions(long_clause);
  std::vector<Clause> comps = split_components(long_clause);
  if (parts.size() != comps.size())
    throw CrError(Err::not_disjoint,
                  "expected one refutation per variable-disjoint component");
  for (const CrDerivation& part : parts) {
    if (part.empty() ||
        !part.node(static_cast<int>(part.size()) - 1)
             .conclusion.is_contradiction())
      throw CrError(Err::not_refutation,
                    "every part must end in the empty clause");
  }
  if (parts.size() == 1) {
    // A single component is the long clause itself; its refutation already
    // refutes the whole problem.
    for (int id = 0; id < static_cast<int>(parts[0].size()); ++id) {
      const CrNode& n = parts[0].node(id);
      if (n.kind == RuleKind::Input)
        match_input(n.conclusion, comps[0], 0, base, std::vector<int>(base.size(), 0));
    }
    return parts[0];
  }

  CrDerivation out;
  std::vector<int> base_ids;
  for (const Clause& c : base) base_ids.push_back(out.add_input(c));
  int long_id = out.add_input(long_clause);

  // One decision per literal of every component after the first.  Their
  // variables are never instantiated downstream, so each later component can
  // be learned back as one disjunct per decision.
  std::map<size_t, int> delta;
  std::vector<std::vector<int>> group_decs(comps.size());
  for (size_t g = 1; g < groups.size(); ++g)
    for (size_t p : groups[g]) {
      int d = out.decide(dual(long_clause.lit(p)));
      delta.emplace(p, d);
      group_decs[g].push_back(d);
    }

  // `source` concludes a variant of the current component.  A unit first
  // component is propagated out of the long clause up front; a multi-literal
  // first component is instead merged into each consuming propagation.
  int source = -1;
  bool merge_first = groups[0].size() > 1;
  if (!merge_first) {
    std::vector<int> us;
    std::vector<size_t> ps;
    for (size_t p = 0; p < long_clause.size(); ++p)
      if (p != groups[0][0]) {
        us.push_back(delta.at(p));
        ps.push_back(p);
      }
    source = out.unit_propagating_resolution(us, long_id, ps);
  }

  int bottom = -1;
  for (size_t g = 0; g < parts.size(); ++g) {
    if (g > 0) {
      if (out.undischarged(bottom).empty())
        return out.restrict_to(bottom).first;  // already refuted
      source = out.clause_learn(bottom, group_decs[g]);
      merge_first = false;
    }
    const CrDerivation& part = parts[g];
    std::map<int, int> map;
    for (int id = 0; id < static_cast<int>(part.size()); ++id) {
      const CrNode& n = part.node(id);
      switch (n.kind) {
        case RuleKind::Input:
          map[id] = merge_first && positional_variant(n.conclusion, comps[g])
                        ? -1
                        : match_input(n.conclusion, comps[g], source, base,
                                      base_ids);
          break;
        case RuleKind::Decision:
          map[id] = out.decide(n.conclusion.lit(0));
          break;
        case RuleKind::Upr: {
          std::vector<int> us;
          for (int u : n.units) us.push_back(map.at(u));
          int cp = map.at(n.clause_premise);
          if (cp == -1) {
            // Widen the propagation over the whole long clause: the part's
            // positions shift into the first component's slots and every
            // other component's literal resolves against its decision.
            std::vector<size_t> ps;
            for (size_t k : n.clause_positions) ps.push_back(groups[0][k]);
            for (size_t p = 0; p < long_clause.size(); ++p)
              if (delta.count(p)) {
                us.push_back(delta.at(p));
                ps.push_back(p);
              }
            map[id] = out.unit_propagating_resolution(us, long_id, ps);
          } else {
            map[id] =
                out.unit_propagating_resolution(us, cp, n.clause_positions);
          }
          break;
        }
        case RuleKind::Conflict:
          map[id] = out.conflict(map.at(n.left), map.at(n.right));
          break;
        case RuleKind::ClauseLearn: {
          std::vector<int> ds;
          for (int d : n.discharged) ds.push_back(map.at(d));
          map[id] = out.clause_learn(map.at(n.bottom), ds);
          break;
        }
      }
    }
    bottom = map.at(static_cast<int>(part.size()) - 1);
  }
  return out.restrict_to(bottom).first;
}

}  // namespace crkit
