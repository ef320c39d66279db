#pragma once

#include <map>
#include <set>
#include <string>

#include "crkit/term.hpp"

namespace crkit {

/**
 * Simultaneous substitution from variables to terms. Identity bindings
 * are never stored; iteration order is variable name order, which keeps
 * printing and composition deterministic.
 */
class Substitution {
public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<Symbol, Term>> bindings);

  /** Adds v -> t, dropping identities. Overwrites an existing binding for v. */
  void bind(const Symbol& v, const Term& t);

  const Term* lookup(const Symbol& v) const;
  bool empty() const { return b_.empty(); }
  size_t size() const { return b_.size(); }
  std::set<Symbol> domain() const;
  const std::map<Symbol, Term>& bindings() const { return b_; }

  Term apply(const Term& t) const;
  Literal apply(const Literal& l) const;
  Clause apply(const Clause& c) const;

  /** apply(x, compose(s1, s2)) == apply(apply(x, s1), s2). */
  static Substitution compose(const Substitution& s1, const Substitution& s2);

  Substitution restricted(const std::set<Symbol>& vars) const;

  /** True when every binding maps a variable to a variable, injectively. */
  bool is_renaming() const;
  bool is_idempotent() const;

  bool operator==(const Substitution& o) const { return b_ == o.b_; }
  bool operator!=(const Substitution& o) const { return !(*this == o); }

  /** {X/a,Y/f(Z)} with bindings in name order; {} when empty. */
  std::string to_string() const;

private:
  std::map<Symbol, Term> b_;
};

}  // namespace crkit
