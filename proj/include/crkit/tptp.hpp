#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "crkit/subst.hpp"
#include "crkit/term.hpp"

namespace crkit {

/** Failure while reading problem text, carrying a 1-based source position. */
class ParseError : public std::runtime_error {
public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg),
        line_(line),
        col_(col),
        msg_(msg) {}

  int line() const { return line_; }
  int col() const { return col_; }
  /** The message without the position prefix. */
  const std::string& message() const { return msg_; }

private:
  int line_;
  int col_;
  std::string msg_;
};

/** One annotated clause of a problem file. */
struct TptpClause {
  std::string name;
  std::string role;
  Clause clause;
};

/** A parsed clause-normal-form problem, in file order. */
struct TptpProblem {
  std::vector<TptpClause> clauses;

  /** Just the clauses, dropping names and roles. */
  std::vector<Clause> clause_list() const;
};

/**
 * Parses clause-normal-form problem text: a sequence of
 *
 *   cnf(name, role, ( lit | ... | lit )).
 *
 * entries with optional parentheses around the disjunction, '%' line
 * comments, '~' negation, lowercase function/predicate symbols, uppercase
 * (or underscore-led) variables, and the propositional constants $true and
 * $false. Clause normal form is applied on construction, so a clause
 * containing $true collapses to the tautology constant and $false members
 * drop out (an all-$false clause becomes the empty clause).
 *
 * Rejected with a ParseError: syntax errors, the role "conjecture" (clause
 * form carries only negated conjectures), a symbol used with two arities,
 * and a symbol used both as predicate and as function.
 */
TptpProblem parse_tptp_cnf(const std::string& text);

/** Reads and parses a problem file; throws std::runtime_error on IO failure. */
TptpProblem parse_tptp_cnf_file(const std::string& path);

/**
 * Parses one clause written `lit | ... | lit` in the problem syntax
 * ($true/$false allowed). The whole string must be consumed.
 */
Clause parse_clause_text(const std::string& text);

/** Parses a single literal. */
Literal parse_literal_text(const std::string& text);

/** Parses a substitution written {X/a,Y/f(b)}; {} is the identity. */
Substitution parse_substitution_text(const std::string& text);

/** One problem line: cnf(name, role, ( clause )). */
std::string tptp_line(const std::string& name, const std::string& role,
                      const Clause& c);

/** Whole problem as numbered axiom lines c1..cN. */
std::string to_tptp(const std::vector<Clause>& problem);

}  // namespace crkit
