#include "crkit/unify.hpp"

#include <deque>

namespace crkit {

namespace {

UnifyResult fail(UnifyFail why) {
  UnifyResult r;
  r.fail = why;
  return r;
}

}  // namespace

UnifyResult unify(const std::vector<std::pair<Term, Term>>& pairs) {
  Substitution sigma;
  std::deque<std::pair<Term, Term>> work(pairs.begin(), pairs.end());
  while (!work.empty()) {
    Term s = sigma.apply(work.front().first);
    Term t = sigma.apply(work.front().second);
    work.pop_front();
    if (s == t) continue;
    if (s.is_var() || t.is_var()) {
      // Prefer binding the left variable so callers control orientation.
      if (!s.is_var()) std::swap(s, t);
      if (t.contains_var(s.symbol())) return fail(UnifyFail::occurs_check);
      Substitution step;
      step.bind(s.symbol(), t);
      sigma = Substitution::compose(sigma, step);
      continue;
    }
    if (s.symbol() != t.symbol() || s.args().size() != t.args().size())
      return fail(UnifyFail::clash);
    for (size_t i = s.args().size(); i-- > 0;)
      work.emplace_front(s.args()[i], t.args()[i]);
  }
  UnifyResult r;
  r.mgu = sigma;
  return r;
}

UnifyResult unify(const std::vector<std::pair<Literal, Literal>>& pairs) {
  std::vector<std::pair<Term, Term>> tp;
  for (const auto& [a, b] : pairs) {
    if (a.positive() != b.positive() || a.pred() != b.pred() ||
        a.args().size() != b.args().size())
      return fail(UnifyFail::clash);
    for (size_t i = 0; i < a.args().size(); ++i)
      tp.emplace_back(a.args()[i], b.args()[i]);
  }
  return unify(tp);
}

namespace {

// A plain map (not a Substitution) so identity bindings still pin their
// variable: X may match X once, but then nothing else.
bool match_into(const Term& pattern, const Term& target,
                std::map<Symbol, Term>& out) {
  if (pattern.is_var()) {
    auto [it, fresh] = out.emplace(pattern.symbol(), target);
    return fresh || it->second == target;
  }
  if (target.is_var()) return false;
  if (pattern.symbol() != target.symbol() ||
      pattern.args().size() != target.args().size())
    return false;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_into(pattern.args()[i], target.args()[i], out)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> match(const std::vector<std::pair<Term, Term>>& pairs) {
  std::map<Symbol, Term> bound;
  for (const auto& [p, t] : pairs)
    if (!match_into(p, t, bound)) return std::nullopt;
  Substitution out;
  for (const auto& [v, t] : bound) out.bind(v, t);
  return out;
}

std::optional<Substitution> match(const std::vector<std::pair<Literal, Literal>>& pairs) {
  std::vector<std::pair<Term, Term>> tp;
  for (const auto& [a, b] : pairs) {
    if (a.positive() != b.positive() || a.pred() != b.pred() ||
        a.args().size() != b.args().size())
      return std::nullopt;
    for (size_t i = 0; i < a.args().size(); ++i)
      tp.emplace_back(a.args()[i], b.args()[i]);
  }
  return match(tp);
}

}  // namespace crkit
