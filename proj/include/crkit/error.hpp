#pragma once

#include <stdexcept>
#include <string>

namespace crkit {

/** Error codes raised by constructors and rule applications. */
enum class Err {
  not_unifiable,
  occurs_check,
  arity_mismatch,
  not_unit,
  same_polarity,
  bad_position,
  no_association,
  not_ancestor,
  not_bottom,
  already_discharged,
  dangling_ref,
  not_single_conflict,
  no_conflict,
  not_ground,
  not_disjoint,
  not_refutation,
  not_tree,
  not_proof,
  metric_mismatch,
  top_bottom_literal,
  bad_rule,
  not_serializable,
};

/**
 * Exception carrying a typed error code. Checkers never throw this;
 * they collect violations into reports instead. Builders throw it when
 * a rule's side conditions fail.
 */
class CrError : public std::runtime_error {
public:
  CrError(Err code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Err code() const { return code_; }

private:
  Err code_;
};

}  // namespace crkit
