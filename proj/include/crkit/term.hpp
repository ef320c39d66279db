#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace crkit {

using Symbol = std::string;

/**
 * First-order term: a variable or a function application. Constants are
 * nullary function applications. Terms are immutable values.
 */
class Term {
public:
  static Term var(Symbol name);
  static Term fn(Symbol name, std::vector<Term> args = {});

  bool is_var() const { return is_var_; }
  bool is_const() const { return !is_var_ && args_.empty(); }
  const Symbol& symbol() const { return sym_; }
  const std::vector<Term>& args() const { return args_; }

  /** Nesting depth: variables and constants have depth 0. */
  int depth() const;

  bool contains_var(const Symbol& v) const;
  void collect_vars(std::set<Symbol>& out) const;

  int cmp(const Term& o) const;
  bool operator==(const Term& o) const { return cmp(o) == 0; }
  bool operator!=(const Term& o) const { return cmp(o) != 0; }
  bool operator<(const Term& o) const { return cmp(o) < 0; }

  std::string to_string() const;

private:
  Term() = default;
  bool is_var_ = false;
  Symbol sym_;
  std::vector<Term> args_;
};

/** Reserved nullary predicates for the propositional constants. */
inline const Symbol kTruePred = "$true";
inline const Symbol kFalsePred = "$false";

/**
 * Literal: a predicate application or its negation. Negations of the
 * propositional constants are normalized away on construction, so a
 * stored literal is never a negated $true or $false.
 */
class Literal {
public:
  Literal(bool positive, Symbol pred, std::vector<Term> args = {});

  static Literal truth() { return Literal(true, kTruePred); }
  static Literal falsity() { return Literal(true, kFalsePred); }

  bool positive() const { return positive_; }
  const Symbol& pred() const { return pred_; }
  const std::vector<Term>& args() const { return args_; }

  bool is_truth() const { return pred_ == kTruePred; }
  bool is_falsity() const { return pred_ == kFalsePred; }
  bool is_prop_const() const { return is_truth() || is_falsity(); }

  /** Complementary literal. Errors on $true/$false. */
  Literal dual() const;

  bool same_atom(const Literal& o) const;
  int depth() const;
  bool contains_var(const Symbol& v) const;
  void collect_vars(std::set<Symbol>& out) const;

  int cmp(const Literal& o) const;
  bool operator==(const Literal& o) const { return cmp(o) == 0; }
  bool operator!=(const Literal& o) const { return cmp(o) != 0; }
  bool operator<(const Literal& o) const { return cmp(o) < 0; }

  std::string to_string() const;

private:
  bool positive_;
  Symbol pred_;
  std::vector<Term> args_;
};

Literal dual(const Literal& l);

/**
 * Clause: a multiset of literals kept in insertion order. Construction
 * applies the normal form: $false members drop out and any $true member
 * collapses the clause to the one-literal $true clause. The empty clause
 * is the contradiction.
 */
class Clause {
public:
  Clause() = default;
  Clause(std::initializer_list<Literal> lits);
  explicit Clause(std::vector<Literal> lits);

  const std::vector<Literal>& literals() const { return lits_; }
  const Literal& lit(size_t i) const { return lits_[i]; }
  size_t size() const { return lits_.size(); }

  bool is_contradiction() const { return lits_.empty(); }
  bool is_tautology_const() const { return lits_.size() == 1 && lits_[0].is_truth(); }
  bool is_unit() const { return lits_.size() == 1 && !lits_[0].is_prop_const(); }

  void collect_vars(std::set<Symbol>& out) const;
  std::set<Symbol> vars() const;
  bool ground() const;
  int max_term_depth() const;

  /** Literals reordered into the canonical total order. */
  Clause canonical() const;

  /** Exact syntactic equality, order-sensitive. */
  bool operator==(const Clause& o) const { return lits_ == o.lits_; }
  bool operator!=(const Clause& o) const { return !(*this == o); }

  std::string to_string() const;

private:
  std::vector<Literal> lits_;
};

/** Normal form of a literal multiset (same rules as the Clause constructor). */
Clause normalize(std::vector<Literal> lits);

/** Multiset equality of literals, ignoring order but not variable names. */
bool multiset_equal(const Clause& a, const Clause& b);

/**
 * Variant test: true when some bijective variable renaming maps a onto b
 * as a literal multiset. variant_map returns one such renaming.
 */
bool variant(const Clause& a, const Clause& b);
bool variant(const Literal& a, const Literal& b);
std::optional<std::map<Symbol, Symbol>> variant_map(const Clause& a, const Clause& b);

/**
 * Variant test that keeps literal positions fixed: one bijective renaming
 * maps a's i-th literal onto b's i-th literal for every i.
 */
bool positional_variant(const Clause& a, const Clause& b);
std::optional<std::map<Symbol, Symbol>> positional_variant_map(const Clause& a,
                                                               const Clause& b);

/**
 * Fresh-name source. Names are generated from a stem with increasing
 * numeric suffixes and never repeat or collide with reserved names.
 */
class NameReservoir {
public:
  void reserve(const Symbol& s) { used_.insert(s); }
  void reserve_clause_vars(const Clause& c);
  bool seen(const Symbol& s) const { return used_.count(s) > 0; }
  Symbol fresh(const Symbol& base);

private:
  std::set<Symbol> used_;
  std::map<Symbol, int> next_suffix_;
};

class Substitution;

/**
 * Renames the variables of c that occur in avoid to fresh names that
 * collide neither with avoid nor with the rest of c. Returns the renamed
 * clause and the renaming applied.
 */
std::pair<Clause, Substitution> rename_apart(const Clause& c, const std::set<Symbol>& avoid);

}  // namespace crkit
