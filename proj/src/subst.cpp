#include "crkit/subst.hpp"

namespace crkit {

Substitution::Substitution(std::initializer_list<std::pair<Symbol, Term>> bs) {
  for (const auto& [v, t] : bs) bind(v, t);
}

void Substitution::bind(const Symbol& var, const Term& t) {
  if (t.is_var() && t.symbol() == var) {
    b_.erase(var);
    return;
  }
  b_.insert_or_assign(var, t);
}

const Term* Substitution::lookup(const Symbol& var) const {
  auto it = b_.find(var);
  return it == b_.end() ? nullptr : &it->second;
}

std::set<Symbol> Substitution::domain() const {
  std::set<Symbol> d;
  for (const auto& [v, t] : b_) d.insert(v);
  return d;
}

Term Substitution::apply(const Term& t) const {
  if (t.is_var()) {
    if (const Term* bound = lookup(t.symbol())) return *bound;
    return t;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(apply(a));
  return Term::fn(t.symbol(), std::move(args));
}

Literal Substitution::apply(const Literal& l) const {
  if (l.args().empty()) return l;
  std::vector<Term> args;
  args.reserve(l.args().size());
  for (const Term& a : l.args()) args.push_back(apply(a));
  return Literal(l.positive(), l.pred(), std::move(args));
}

Clause Substitution::apply(const Clause& c) const {
  std::vector<Literal> lits;
  lits.reserve(c.size());
  for (const Literal& l : c.literals()) lits.push_back(apply(l));
  return Clause(std::move(lits));
}

Substitution Substitution::compose(const Substitution& s1, const Substitution& s2) {
  Substitution r;
  for (const auto& [v, t] : s1.b_) r.bind(v, s2.apply(t));
  for (const auto& [v, t] : s2.b_) {
    if (!s1.b_.count(v)) r.bind(v, t);
  }
  return r;
}

Substitution Substitution::restricted(const std::set<Symbol>& vars) const {
  Substitution r;
  for (const auto& [v, t] : b_)
    if (vars.count(v)) r.bind(v, t);
  return r;
}

bool Substitution::is_renaming() const {
  std::set<Symbol> images;
  for (const auto& [v, t] : b_) {
    if (!t.is_var()) return false;
    if (!images.insert(t.symbol()).second) return false;
  }
  return true;
}

bool Substitution::is_idempotent() const {
  // No bound variable may occur in any image.
  for (const auto& [v, t] : b_)
    for (const auto& [w, img] : b_)
      if (img.contains_var(v)) return false;
  return true;
}

std::string Substitution::to_string() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [v, t] : b_) {
    if (!first) s += ',';
    first = false;
    s += v + "/" + t.to_string();
  }
  return s + "}";
}

}  // namespace crkit
