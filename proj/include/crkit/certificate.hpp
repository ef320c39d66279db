#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crkit/cnd.hpp"
#include "crkit/kernel.hpp"
#include "crkit/resolution.hpp"
#include "crkit/term.hpp"
#include "crkit/tptp.hpp"

namespace crkit {

/** FNV-1a 64-bit digest of the rendered clause list, in list order. */
uint64_t problem_digest(const std::vector<Clause>& problem);

/** The digest as 16 lowercase hex digits. */
std::string digest_hex(uint64_t digest);

/**
 * Text certificates. A certificate is line-oriented ('%' lines and blank
 * lines are ignored):
 *
 *   cert <cr|res|cnd> problem <digest>
 *   node <id> <rule and fields> : <clause>
 *
 * Substitutions are written {X/a,Y/f(b)}, clauses and literals in the
 * problem syntax. Node ids count up from 0. Internal renamings are not
 * written: loading reconstructs each node's renaming by positionally
 * matching the recomputed conclusion against the stored one, and anything
 * that cannot be reconstructed is left for the calculus checker to flag.
 *
 * Writers require names the problem syntax can read back — variables led
 * by uppercase or underscore, function and predicate symbols led by a
 * lowercase letter — and throw CrError(Err::not_serializable) otherwise.
 */
std::string write_certificate(const CrDerivation& d, uint64_t digest);
std::string write_certificate(const ResDerivation& d, uint64_t digest);
std::string write_certificate(const CndDerivation& d, uint64_t digest);

enum class CertCalculus { Cr, Res, Cnd };

std::string to_string(CertCalculus c);

/** A parsed certificate; the member matching `calculus` is populated. */
struct ParsedCertificate {
  CertCalculus calculus = CertCalculus::Cr;
  uint64_t digest = 0;
  CrDerivation cr;
  ResDerivation res;
  CndDerivation cnd;
};

/**
 * Parses certificate text. Malformed syntax and dangling references throw
 * ParseError; logical validity is the calculus checkers' business.
 */
ParsedCertificate parse_certificate(const std::string& text);

/** Reads and parses a certificate file; throws std::runtime_error on IO failure. */
ParsedCertificate parse_certificate_file(const std::string& path);

}  // namespace crkit
