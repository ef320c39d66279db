#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "crkit/subst.hpp"
#include "crkit/term.hpp"

namespace crkit {

enum class UnifyFail { clash, occurs_check };

struct UnifyResult {
  std::optional<Substitution> mgu;
  UnifyFail fail = UnifyFail::clash;
  explicit operator bool() const { return mgu.has_value(); }
};

/**
 * Most general simultaneous unifier of the pair list, processed left to
 * right with eager composition and an occurs check. When both sides of a
 * pair are variables the left one is bound, so callers control which
 * side's variables survive. The result is idempotent.
 */
UnifyResult unify(const std::vector<std::pair<Term, Term>>& pairs);

/** Literal pairs must agree on polarity, predicate, and arity. */
UnifyResult unify(const std::vector<std::pair<Literal, Literal>>& pairs);

/**
 * One-way matching: a substitution d over pattern variables with
 * apply(pattern, d) == instance for every pair, or nullopt.
 */
std::optional<Substitution> match(const std::vector<std::pair<Term, Term>>& pairs);
std::optional<Substitution> match(const std::vector<std::pair<Literal, Literal>>& pairs);

}  // namespace crkit
