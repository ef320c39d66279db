#include "crkit/term.hpp"

#include <algorithm>
#include <cctype>

#include "crkit/error.hpp"
#include "crkit/subst.hpp"

namespace crkit {

Term Term::var(Symbol name) {
  Term t;
  t.is_var_ = true;
  t.sym_ = std::move(name);
  return t;
}

Term Term::fn(Symbol name, std::vector<Term> args) {
  Term t;
  t.is_var_ = false;
  t.sym_ = std::move(name);
  t.args_ = std::move(args);
  return t;
}

int Term::depth() const {
  int d = 0;
  for (const Term& a : args_) d = std::max(d, a.depth() + 1);
  return d;
}

bool Term::contains_var(const Symbol& v) const {
  if (is_var_) return sym_ == v;
  for (const Term& a : args_)
    if (a.contains_var(v)) return true;
  return false;
}

void Term::collect_vars(std::set<Symbol>& out) const {
  if (is_var_) {
    out.insert(sym_);
    return;
  }
  for (const Term& a : args_) a.collect_vars(out);
}

int Term::cmp(const Term& o) const {
  // Variables order before function applications.
  if (is_var_ != o.is_var_) return is_var_ ? -1 : 1;
  if (int c = sym_.compare(o.sym_); c != 0) return c < 0 ? -1 : 1;
  if (args_.size() != o.args_.size()) return args_.size() < o.args_.size() ? -1 : 1;
  for (size_t i = 0; i < args_.size(); ++i)
    if (int c = args_[i].cmp(o.args_[i]); c != 0) return c;
  return 0;
}

std::string Term::to_string() const {
  std::string s = sym_;
  if (!args_.empty()) {
    s += '(';
    for (size_t i = 0; i < args_.size(); ++i) {
      if (i) s += ',';
      s += args_[i].to_string();
    }
    s += ')';
  }
  return s;
}

Literal::Literal(bool positive, Symbol pred, std::vector<Term> args)
    : positive_(positive), pred_(std::move(pred)), args_(std::move(args)) {
  if (pred_ == kTruePred || pred_ == kFalsePred) {
    if (!args_.empty())
      throw CrError(Err::arity_mismatch, pred_ + " takes no arguments");
    if (!positive_) {
      // ~$true is $false and vice versa.
      positive_ = true;
      pred_ = pred_ == kTruePred ? kFalsePred : kTruePred;
    }
  }
}

Literal Literal::dual() const {
  if (is_prop_const())
    throw CrError(Err::top_bottom_literal, "dual of " + pred_ + " is undefined");
  return Literal(!positive_, pred_, args_);
}

Literal dual(const Literal& l) { return l.dual(); }

bool Literal::same_atom(const Literal& o) const {
  return pred_ == o.pred_ && args_ == o.args_;
}

int Literal::depth() const {
  int d = 0;
  for (const Term& a : args_) d = std::max(d, a.depth());
  return d;
}

bool Literal::contains_var(const Symbol& v) const {
  for (const Term& a : args_)
    if (a.contains_var(v)) return true;
  return false;
}

void Literal::collect_vars(std::set<Symbol>& out) const {
  for (const Term& a : args_) a.collect_vars(out);
}

int Literal::cmp(const Literal& o) const {
  if (int c = pred_.compare(o.pred_); c != 0) return c < 0 ? -1 : 1;
  if (positive_ != o.positive_) return positive_ ? -1 : 1;
  if (args_.size() != o.args_.size()) return args_.size() < o.args_.size() ? -1 : 1;
  for (size_t i = 0; i < args_.size(); ++i)
    if (int c = args_[i].cmp(o.args_[i]); c != 0) return c;
  return 0;
}

std::string Literal::to_string() const {
  std::string s = positive_ ? "" : "~";
  s += pred_;
  if (!args_.empty()) {
    s += '(';
    for (size_t i = 0; i < args_.size(); ++i) {
      if (i) s += ',';
      s += args_[i].to_string();
    }
    s += ')';
  }
  return s;
}

Clause::Clause(std::initializer_list<Literal> lits)
    : Clause(std::vector<Literal>(lits)) {}

Clause::Clause(std::vector<Literal> lits) {
  for (Literal& l : lits) {
    if (l.is_truth()) {
      // A true member subsumes the whole clause.
      lits_ = {Literal::truth()};
      return;
    }
    if (l.is_falsity()) continue;
    lits_.push_back(std::move(l));
  }
}

Clause normalize(std::vector<Literal> lits) { return Clause(std::move(lits)); }

void Clause::collect_vars(std::set<Symbol>& out) const {
  for (const Literal& l : lits_) l.collect_vars(out);
}

std::set<Symbol> Clause::vars() const {
  std::set<Symbol> v;
  collect_vars(v);
  return v;
}

bool Clause::ground() const { return vars().empty(); }

int Clause::max_term_depth() const {
  int d = 0;
  for (const Literal& l : lits_) d = std::max(d, l.depth());
  return d;
}

namespace {

// Key that ignores variable identity: variables render as their
// first-occurrence index within the literal.
std::string skeleton_key(const Term& t, std::map<Symbol, int>& idx) {
  if (t.is_var()) {
    auto [it, fresh] = idx.emplace(t.symbol(), static_cast<int>(idx.size()));
    return "#" + std::to_string(it->second);
  }
  std::string s = t.symbol();
  s += '(';
  for (const Term& a : t.args()) s += skeleton_key(a, idx) + ",";
  s += ')';
  return s;
}

std::string literal_key(const Literal& l) {
  std::map<Symbol, int> idx;
  std::string s = l.pred();
  s += l.positive() ? '+' : '-';
  for (const Term& a : l.args()) s += skeleton_key(a, idx) + ";";
  // Full rendering breaks ties between same-skeleton literals.
  return s + "|" + l.to_string();
}

}  // namespace

Clause Clause::canonical() const {
  std::vector<Literal> ls = lits_;
  std::stable_sort(ls.begin(), ls.end(), [](const Literal& a, const Literal& b) {
    return literal_key(a) < literal_key(b);
  });
  Clause c;
  c.lits_ = std::move(ls);
  return c;
}

std::string Clause::to_string() const {
  if (lits_.empty()) return kFalsePred;
  std::string s;
  for (size_t i = 0; i < lits_.size(); ++i) {
    if (i) s += " | ";
    s += lits_[i].to_string();
  }
  return s;
}

bool multiset_equal(const Clause& a, const Clause& b) {
  if (a.size() != b.size()) return false;
  std::vector<Literal> bl = b.literals();
  for (const Literal& l : a.literals()) {
    auto it = std::find(bl.begin(), bl.end(), l);
    if (it == bl.end()) return false;
    bl.erase(it);
  }
  return true;
}

namespace {

// Extends the bijection var_ab/var_ba so that a maps onto b, or fails.
bool variant_terms(const Term& a, const Term& b, std::map<Symbol, Symbol>& ab,
                   std::map<Symbol, Symbol>& ba) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) {
    auto f = ab.find(a.symbol());
    auto g = ba.find(b.symbol());
    if (f == ab.end() && g == ba.end()) {
      ab[a.symbol()] = b.symbol();
      ba[b.symbol()] = a.symbol();
      return true;
    }
    return f != ab.end() && g != ba.end() && f->second == b.symbol() &&
           g->second == a.symbol();
  }
  if (a.symbol() != b.symbol() || a.args().size() != b.args().size()) return false;
  for (size_t i = 0; i < a.args().size(); ++i)
    if (!variant_terms(a.args()[i], b.args()[i], ab, ba)) return false;
  return true;
}

bool variant_literals(const Literal& a, const Literal& b, std::map<Symbol, Symbol>& ab,
                      std::map<Symbol, Symbol>& ba) {
  if (a.positive() != b.positive() || a.pred() != b.pred() ||
      a.args().size() != b.args().size())
    return false;
  for (size_t i = 0; i < a.args().size(); ++i)
    if (!variant_terms(a.args()[i], b.args()[i], ab, ba)) return false;
  return true;
}

// Backtracking multiset match of a's literals onto b's under one bijection.
bool variant_search(const std::vector<Literal>& a, std::vector<bool>& used,
                    const std::vector<Literal>& b, size_t i,
                    std::map<Symbol, Symbol>& ab, std::map<Symbol, Symbol>& ba) {
  if (i == a.size()) return true;
  for (size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    std::map<Symbol, Symbol> ab2 = ab, ba2 = ba;
    if (variant_literals(a[i], b[j], ab2, ba2)) {
      used[j] = true;
      std::swap(ab, ab2);
      std::swap(ba, ba2);
      if (variant_search(a, used, b, i + 1, ab, ba)) return true;
      std::swap(ab, ab2);
      std::swap(ba, ba2);
      used[j] = false;
    }
  }
  return false;
}

}  // namespace

std::optional<std::map<Symbol, Symbol>> variant_map(const Clause& a, const Clause& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::map<Symbol, Symbol> ab, ba;
  std::vector<bool> used(b.size(), false);
  if (variant_search(a.literals(), used, b.literals(), 0, ab, ba)) return ab;
  return std::nullopt;
}

std::optional<std::map<Symbol, Symbol>> positional_variant_map(const Clause& a,
                                                               const Clause& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::map<Symbol, Symbol> ab, ba;
  for (size_t i = 0; i < a.size(); ++i)
    if (!variant_literals(a.lit(i), b.lit(i), ab, ba)) return std::nullopt;
  return ab;
}

bool positional_variant(const Clause& a, const Clause& b) {
  return positional_variant_map(a, b).has_value();
}

bool variant(const Clause& a, const Clause& b) { return variant_map(a, b).has_value(); }

bool variant(const Literal& a, const Literal& b) {
  std::map<Symbol, Symbol> ab, ba;
  return variant_literals(a, b, ab, ba);
}

void NameReservoir::reserve_clause_vars(const Clause& c) {
  std::set<Symbol> v;
  c.collect_vars(v);
  for (const Symbol& s : v) reserve(s);
}

namespace {

// X_3 and X3 both have stem X, so regenerated names stay short.
Symbol stem_of(const Symbol& name) {
  size_t end = name.size();
  while (end > 1 && std::isdigit(static_cast<unsigned char>(name[end - 1]))) --end;
  if (end > 1 && name[end - 1] == '_') --end;
  return name.substr(0, end);
}

}  // namespace

Symbol NameReservoir::fresh(const Symbol& base) {
  Symbol stem = stem_of(base);
  int& n = next_suffix_[stem];
  for (;;) {
    ++n;
    Symbol cand = stem + "_" + std::to_string(n);
    if (!used_.count(cand)) {
      used_.insert(cand);
      return cand;
    }
  }
}

std::pair<Clause, Substitution> rename_apart(const Clause& c, const std::set<Symbol>& avoid) {
  NameReservoir names;
  for (const Symbol& s : avoid) names.reserve(s);
  names.reserve_clause_vars(c);
  Substitution ren;
  for (const Symbol& v : c.vars())
    if (avoid.count(v)) ren.bind(v, Term::var(names.fresh(v)));
  return {ren.apply(c), ren};
}

}  // namespace crkit
