#include "crkit/search.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "crkit/error.hpp"
#include "crkit/unify.hpp"

namespace crkit {

std::string to_string(SolveKind k) {
  return k == SolveKind::Unsat ? "unsat" : "unknown";
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::refuted: return "refuted";
    case StopReason::saturation: return "saturation";
    case StopReason::decision_limit: return "decision-limit";
    case StopReason::propagation_limit: return "propagation-limit";
    case StopReason::conflict_limit: return "conflict-limit";
    case StopReason::depth_limit: return "depth-limit";
  }
  return "unknown";
}

namespace {

/**
 * Variant-insensitive fingerprint: variables renumbered in first-occurrence
 * order, so any two variant literals print the same key. Used for the burn
 * set, which must recognize a retried candidate across kernel renamings.
 */
std::string canon_key(const Literal& l) {
  std::map<Symbol, int> index;
  std::function<void(const Term&)> number = [&](const Term& t) {
    if (t.is_var()) {
      if (!index.count(t.symbol())) {
        int k = static_cast<int>(index.size());
        index.emplace(t.symbol(), k);
      }
      return;
    }
    for (const Term& a : t.args()) number(a);
  };
  for (const Term& a : l.args()) number(a);
  Substitution s;
  for (const auto& [v, k] : index) s.bind(v, Term::var("#" + std::to_string(k)));
  return s.apply(l).to_string();
}

struct TrailEntry {
  int node = -1;
  Literal lit;
  int level = 0;
};

// Sentinel memo values for tuples that can never produce a unit.
constexpr int kTupleClash = -2;
constexpr int kTupleTooDeep = -3;

struct Searcher {
  explicit Searcher(const SolverOptions& opts)
      : limits(opts.limits), seed(opts.seed_decision) {}

  SolverLimits limits;
  std::optional<Literal> seed;

  CrDerivation d;
  std::vector<int> clause_db;  // nodes with 2+ literal conclusions
  std::vector<int> unit_db;    // nodes with unit conclusions
  std::vector<TrailEntry> trail;
  int level = 0;

  SolveStats stats;
  std::vector<int> conflict_nodes;
  std::vector<Clause> learned;
  std::set<std::string> burned;
  std::set<Symbol> constants;  // nullary function symbols of the input

  // (clause node, leftover position, unit nodes in slot order) -> the unit
  // node this tuple derived, or a sentinel when it can never derive one.
  std::map<std::tuple<int, size_t, std::vector<int>>, int> memo;

  bool prop_limit_hit = false;

  bool variant_on_trail(const Literal& l) const {
    for (const TrailEntry& e : trail)
      if (variant(e.lit, l)) return true;
    return false;
  }

  bool dual_variant_on_trail(const Literal& l) const {
    Literal dl = dual(l);
    for (const TrailEntry& e : trail)
      if (variant(e.lit, dl)) return true;
    return false;
  }

  static bool complementary_shape(const Literal& a, const Literal& b) {
    return a.positive() != b.positive() && a.pred() == b.pred() &&
           a.args().size() == b.args().size();
  }

  static bool atoms_unify(const Literal& a, const Literal& b) {
    std::vector<std::pair<Term, Term>> pairs;
    for (size_t k = 0; k < a.args().size(); ++k)
      pairs.push_back({a.args()[k], b.args()[k]});
    return static_cast<bool>(unify(pairs));
  }

  /**
   * Appends the unit node to the trail and scans, oldest first, for an
   * existing entry it contradicts. Returns the conflict node id, or -1.
   * Non-decision pushes count toward the propagation limit; when the
   * limit trips, nothing is pushed and prop_limit_hit is set.
   */
  int push_unit(int node, bool is_decision) {
    Literal lit = d.unit_of(node);
    if (!is_decision) {
      ++stats.propagations;
      if (stats.propagations > limits.max_propagations) {
        prop_limit_hit = true;
        return -1;
      }
    }
    trail.push_back({node, lit, level});
    for (size_t i = 0; i + 1 < trail.size(); ++i) {
      const TrailEntry& e = trail[i];
      if (!complementary_shape(e.lit, lit)) continue;
      if (!atoms_unify(e.lit, lit)) continue;
      return d.conflict(e.node, node);
    }
    return -1;
  }

  /**
   * Runs unit propagation to fixpoint. Database units without a variant on
   * the trail re-enter first; then each trail entry, oldest first, serves
   * as the newest member of candidate unit tuples against every database
   * clause. Returns a conflict node id as soon as one closes, -1 at
   * fixpoint or when the propagation limit trips.
   */
  int propagate() {
    for (int un : unit_db) {
      Literal l = d.unit_of(un);
      if (variant_on_trail(l)) continue;
      int c = push_unit(un, false);
      if (prop_limit_hit) return -1;
      if (c >= 0) return c;
    }
    for (size_t qi = 0; qi < trail.size(); ++qi) {
      for (size_t ci = 0; ci < clause_db.size(); ++ci) {
        int cn = clause_db[ci];
        Clause c = d.node(cn).conclusion;
        for (size_t p = 0; p < c.size(); ++p) {
          int r = try_leftover(cn, c, p, qi);
          if (prop_limit_hit) return -1;
          if (r >= 0) return r;
        }
      }
    }
    return -1;
  }

  /**
   * Enumerates unit tuples covering every position of c except p, using
   * only trail prefixes up to qi with at least one entry exactly at qi
   * (the trigger), and tries each new tuple once.
   */
  int try_leftover(int cn, const Clause& c, size_t p, size_t qi) {
    std::vector<size_t> slots;
    for (size_t q = 0; q < c.size(); ++q)
      if (q != p) slots.push_back(q);

    std::vector<std::vector<size_t>> cand(slots.size());
    for (size_t s = 0; s < slots.size(); ++s) {
      const Literal& cl = c.lit(slots[s]);
      if (cl.is_prop_const()) return -1;
      for (size_t i = 0; i <= qi && i < trail.size(); ++i)
        if (complementary_shape(cl, trail[i].lit)) cand[s].push_back(i);
      if (cand[s].empty()) return -1;
    }

    std::vector<size_t> choice(slots.size(), 0);
    std::function<int(size_t, bool)> dfs = [&](size_t s, bool saw_qi) -> int {
      if (s == slots.size()) return saw_qi ? try_tuple(cn, c, p, slots, choice) : -1;
      for (size_t i : cand[s]) {
        choice[s] = i;
        int r = dfs(s + 1, saw_qi || i == qi);
        if (prop_limit_hit || r >= 0) return r;
      }
      return -1;
    };
    return dfs(0, false);
  }

  int try_tuple(int cn, const Clause& c, size_t p,
                const std::vector<size_t>& slots,
                const std::vector<size_t>& choice) {
    std::vector<int> unit_nodes(slots.size());
    for (size_t s = 0; s < slots.size(); ++s)
      unit_nodes[s] = trail[choice[s]].node;
    auto key = std::make_tuple(cn, p, unit_nodes);

    int unode = -1;
    auto it = memo.find(key);
    if (it != memo.end()) {
      if (it->second == kTupleClash) return -1;
      if (it->second == kTupleTooDeep) {
        stats.depth_pruned = true;
        return -1;
      }
      unode = it->second;
      Literal concl = d.unit_of(unode);
      if (variant_on_trail(concl)) return -1;
    } else {
      std::vector<std::pair<Literal, Literal>> pairs;
      for (size_t s = 0; s < slots.size(); ++s)
        pairs.push_back({dual(c.lit(slots[s])), trail[choice[s]].lit});
      UnifyResult r = unify(pairs);
      if (!r) {
        memo.emplace(key, kTupleClash);
        return -1;
      }
      Literal concl = r.mgu->apply(c.lit(p));
      if (concl.depth() > limits.max_term_depth) {
        stats.depth_pruned = true;
        memo.emplace(key, kTupleTooDeep);
        return -1;
      }
      // A variant already on the trail is a transient skip: after
      // backtracking the unit may be needed again, so nothing is cached.
      if (variant_on_trail(concl)) return -1;
      unode = d.unit_propagating_resolution(unit_nodes, cn, slots);
      memo.emplace(key, unode);
    }
    return push_unit(unode, false);
  }

  bool falsified(const Clause& c) const {
    for (const Literal& l : c.literals()) {
      bool hit = false;
      for (const TrailEntry& e : trail) {
        if (complementary_shape(e.lit, l) && atoms_unify(e.lit, l)) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
    return !c.literals().empty();
  }

  void pop_level() {
    while (!trail.empty() && trail.back().level == level) trail.pop_back();
    --level;
  }

  /** Predicate signatures in the database with the polarities each occurs in. */
  std::map<std::pair<Symbol, size_t>, std::pair<bool, bool>> signatures() const {
    std::map<std::pair<Symbol, size_t>, std::pair<bool, bool>> sig;
    auto scan = [&](int n) {
      for (const Literal& l : d.node(n).conclusion.literals()) {
        if (l.is_prop_const()) continue;
        auto& [pos, neg] = sig[{l.pred(), l.args().size()}];
        (l.positive() ? pos : neg) = true;
      }
    };
    for (int n : unit_db) scan(n);
    for (int n : clause_db) scan(n);
    return sig;
  }

  bool admissible(const Literal& l) const {
    return !variant_on_trail(l) && !dual_variant_on_trail(l);
  }

  std::optional<Literal> next_decision() {
    // Layer 0: the one-shot seed.
    if (seed) {
      Literal s = *seed;
      seed.reset();
      if (!s.is_prop_const() && admissible(s)) return s;
    }

    // Layer 1: first literal of the latest learned clause.
    if (!learned.empty()) {
      const Clause& lc = learned.back();
      if (!lc.is_contradiction() && !lc.lit(0).is_prop_const()) {
        const Literal& cand = lc.lit(0);
        if (!burned.count(canon_key(cand)) && admissible(cand)) return cand;
      }
    }

    auto sig = signatures();

    // Layer 2: one fresh-variable atom per predicate that occurs with both
    // polarities (a pure predicate can never feed a conflict).
    for (const auto& [key, pol] : sig) {
      if (!pol.first || !pol.second) continue;
      std::vector<Term> args;
      for (size_t k = 0; k < key.second; ++k)
        args.push_back(Term::var("X" + std::to_string(k + 1)));
      Literal cand(true, key.first, args);
      if (burned.count(canon_key(cand))) continue;
      if (admissible(cand)) return cand;
    }

    // Layer 3: ground atoms, read off the database and completed with
    // tuples of the problem's constants over each impure signature.
    std::set<Literal> ground;
    auto harvest = [&](int n) {
      for (const Literal& l : d.node(n).conclusion.literals()) {
        if (l.is_prop_const() || !sig.count({l.pred(), l.args().size()})) continue;
        const auto& pol = sig.at({l.pred(), l.args().size()});
        if (!pol.first || !pol.second) continue;
        Literal atom(true, l.pred(), l.args());
        if (Clause{atom}.ground()) ground.insert(atom);
      }
    };
    for (int n : unit_db) harvest(n);
    for (int n : clause_db) harvest(n);

    std::vector<Term> univ;
    for (const Symbol& s : constants) univ.push_back(Term::fn(s));
    if (univ.empty()) univ.push_back(Term::fn("w0"));
    for (const auto& [key, pol] : sig) {
      if (!pol.first || !pol.second) continue;
      size_t arity = key.second;
      if (arity > 3) continue;
      std::vector<size_t> odo(arity, 0);
      for (;;) {
        std::vector<Term> args;
        for (size_t k = 0; k < arity; ++k) args.push_back(univ[odo[k]]);
        ground.insert(Literal(true, key.first, args));
        size_t k = 0;
        while (k < arity && ++odo[k] == univ.size()) odo[k++] = 0;
        if (k == arity) break;
      }
    }

    for (const Literal& cand : ground)
      if (admissible(cand)) return cand;
    return std::nullopt;
  }
};

}  // namespace

SolveResult solve(const std::vector<Clause>& problem,
                  const SolverOptions& opts) {
  Searcher s(opts);

  for (const Clause& c : problem) {
    std::function<void(const Term&)> walk = [&](const Term& t) {
      if (t.is_var()) return;
      if (t.args().empty()) s.constants.insert(t.symbol());
      for (const Term& a : t.args()) walk(a);
    };
    for (const Literal& l : c.literals())
      for (const Term& t : l.args()) walk(t);
  }

  int empty_input = -1;
  for (const Clause& c : problem) {
    int id = s.d.add_input(c);
    const Clause& stored = s.d.node(id).conclusion;
    if (stored.is_contradiction()) {
      if (empty_input < 0) empty_input = id;
    } else if (stored.is_tautology_const()) {
      // Satisfied by every interpretation; never useful to resolve with.
    } else if (stored.is_unit()) {
      s.unit_db.push_back(id);
    } else {
      s.clause_db.push_back(id);
    }
  }

  auto finish = [&](SolveKind kind, StopReason reason,
                    int refutation) -> SolveResult {
    SolveResult out;
    out.kind = kind;
    out.reason = reason;
    out.refutation = refutation;
    out.derivation = std::move(s.d);
    out.conflicts = std::move(s.conflict_nodes);
    out.learned = std::move(s.learned);
    out.stats = s.stats;
    return out;
  };

  if (empty_input >= 0)
    return finish(SolveKind::Unsat, StopReason::refuted, empty_input);

  for (;;) {
    int cfl = s.propagate();
    if (s.prop_limit_hit)
      return finish(SolveKind::Unknown, StopReason::propagation_limit, -1);

    if (cfl < 0) {
      std::optional<Literal> pick = s.next_decision();
      if (!pick)
        return finish(SolveKind::Unknown,
                      s.stats.depth_pruned ? StopReason::depth_limit
                                           : StopReason::saturation,
                      -1);
      if (s.level + 1 > s.limits.max_decisions)
        return finish(SolveKind::Unknown, StopReason::decision_limit, -1);
      ++s.level;
      ++s.stats.decisions;
      s.stats.max_level = std::max(s.stats.max_level, s.level);
      int dn = s.d.decide(*pick);
      cfl = s.push_unit(dn, true);
      if (cfl < 0) continue;
    }

    s.conflict_nodes.push_back(cfl);
    ++s.stats.conflicts;
    std::vector<int> undis = s.d.undischarged(cfl);
    if (undis.empty())
      return finish(SolveKind::Unsat, StopReason::refuted, cfl);

    if (s.stats.conflicts > s.limits.max_conflicts)
      return finish(SolveKind::Unknown, StopReason::conflict_limit, -1);

    int cl = s.d.clause_learn(cfl, undis);
    Clause lc = s.d.node(cl).conclusion;
    s.learned.push_back(lc);

    bool duplicate = false;
    for (int n : s.unit_db)
      if (variant(s.d.node(n).conclusion, lc)) duplicate = true;
    for (int n : s.clause_db)
      if (variant(s.d.node(n).conclusion, lc)) duplicate = true;
    if (duplicate) {
      // Retrying the decision that led here would relearn the same clause
      // forever; retire the deepest one from the heuristic layers.
      int deepest = -1, deepest_level = -1;
      for (int dec : undis)
        for (const TrailEntry& e : s.trail)
          if (e.node == dec && e.level > deepest_level) {
            deepest = dec;
            deepest_level = e.level;
          }
      if (deepest >= 0) s.burned.insert(canon_key(s.d.unit_of(deepest)));
    }

    if (lc.is_unit())
      s.unit_db.push_back(cl);
    else if (!lc.is_contradiction() && !lc.is_tautology_const())
      s.clause_db.push_back(cl);

    // Every discharged decision must leave the trail: the kernel discharges
    // a decision exactly once, so a conflict may never see one again. Then
    // keep unwinding while the learned clause stays falsified.
    int min_lvl = s.level + 1;
    for (int dec : undis)
      for (const TrailEntry& e : s.trail)
        if (e.node == dec) min_lvl = std::min(min_lvl, e.level);
    while (s.level > 0 && (s.level >= min_lvl || s.falsified(lc)))
      s.pop_level();
  }
}

CrDerivation conflict_slice(const CrDerivation& d, int conflict) {
  if (conflict < 0 || conflict >= static_cast<int>(d.size()))
    throw CrError(Err::dangling_ref, "conflict node out of range");
  if (d.node(conflict).kind != RuleKind::Conflict)
    throw CrError(Err::no_conflict, "node is not a conflict");

  // The cone trimmed at clause-learning nodes: a learned clause enters as
  // an input stand-in, cutting the earlier round's subderivation out.
  std::set<int> keep;
  std::vector<int> stack{conflict};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (!keep.insert(v).second) continue;
    const CrNode& n = d.node(v);
    if (n.kind == RuleKind::Upr || n.kind == RuleKind::Conflict)
      for (int p : d.premises(v)) stack.push_back(p);
  }

  // Canonical layout: every input-like node first, then the trail in its
  // original order, so the graph reading round-trips order-stably.
  CrDerivation s;
  std::map<int, int> m;
  for (int v : keep) {
    const CrNode& n = d.node(v);
    if (n.kind == RuleKind::Input || n.kind == RuleKind::ClauseLearn)
      m.emplace(v, s.add_input(n.conclusion));
  }
  for (int v : keep) {
    const CrNode& n = d.node(v);
    switch (n.kind) {
      case RuleKind::Input:
      case RuleKind::ClauseLearn:
        break;
      case RuleKind::Decision:
        m.emplace(v, s.decide(d.unit_of(v)));
        break;
      case RuleKind::Upr: {
        std::vector<int> us;
        for (int u : n.units) us.push_back(m.at(u));
        m.emplace(v, s.unit_propagating_resolution(us, m.at(n.clause_premise),
                                                   n.clause_positions));
        break;
      }
      case RuleKind::Conflict:
        m.emplace(v, s.conflict(m.at(n.left), m.at(n.right)));
        break;
    }
  }
  return s;
}

}  // namespace crkit
