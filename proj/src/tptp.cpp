#include "crkit/tptp.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

namespace crkit {

namespace {

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)); }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool is_ident(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Parser {
  const std::string& s;
  size_t pos = 0;
  int line = 1;
  int col = 1;
  // Symbol signature seen so far: arity and whether it names a predicate.
  std::map<std::string, std::pair<size_t, bool>> sig;

  explicit Parser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line, col, msg);
  }
  [[noreturn]] static void fail_at(int l, int c, const std::string& msg) {
    throw ParseError(l, c, msg);
  }

  bool eof() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }

  void advance() {
    if (s[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == '%') {
        while (!eof() && peek() != '\n') advance();
      } else if (is_space(c)) {
        advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool try_consume(char c) {
    skip_ws();
    if (eof() || peek() != c) return false;
    advance();
    return true;
  }

  std::string read_word() {
    std::string w;
    while (!eof() && is_ident(peek())) {
      w += peek();
      advance();
    }
    return w;
  }

  void note(const std::string& sym, size_t arity, bool as_pred, int l, int c) {
    auto [it, fresh] = sig.emplace(sym, std::make_pair(arity, as_pred));
    if (fresh) return;
    if (it->second.second != as_pred)
      fail_at(l, c,
              "'" + sym + "' is used both as a predicate and as a function symbol");
    if (it->second.first != arity)
      fail_at(l, c, "'" + sym + "' is used with arity " + std::to_string(arity) +
                        " after arity " + std::to_string(it->second.first));
  }

  std::vector<Term> maybe_args() {
    std::vector<Term> args;
    skip_ws();
    if (!eof() && peek() == '(') {
      advance();
      args.push_back(term());
      while (try_consume(',')) args.push_back(term());
      expect(')');
    }
    return args;
  }

  Term term() {
    skip_ws();
    if (eof()) fail("expected a term");
    char c = peek();
    int l = line, cl = col;
    if (is_upper(c) || c == '_') {
      std::string v = read_word();
      skip_ws();
      if (!eof() && peek() == '(')
        fail_at(l, cl, "variable " + v + " cannot take arguments");
      return Term::var(v);
    }
    if (is_lower(c)) {
      std::string f = read_word();
      std::vector<Term> args = maybe_args();
      note(f, args.size(), false, l, cl);
      return Term::fn(f, std::move(args));
    }
    if (is_digit(c)) fail("numeric terms are not supported");
    if (c == '$') fail("$-words are not allowed inside terms");
    fail(std::string("unexpected character '") + c + "' in term");
  }

  Literal literal() {
    skip_ws();
    bool positive = true;
    if (!eof() && peek() == '~') {
      advance();
      positive = false;
    }
    skip_ws();
    if (eof()) fail("expected a literal");
    char c = peek();
    int l = line, cl = col;
    if (c == '$') {
      advance();
      std::string w = read_word();
      if (w == "true") return Literal(positive, kTruePred);
      if (w == "false") return Literal(positive, kFalsePred);
      fail_at(l, cl, "unknown $-word $" + w);
    }
    if (!is_lower(c)) fail("expected a predicate or $true/$false");
    std::string p = read_word();
    std::vector<Term> args = maybe_args();
    note(p, args.size(), true, l, cl);
    return Literal(positive, p, std::move(args));
  }

  Clause formula() {
    bool parens = try_consume('(');
    std::vector<Literal> lits;
    lits.push_back(literal());
    while (try_consume('|')) lits.push_back(literal());
    if (parens) expect(')');
    return Clause(std::move(lits));
  }

  std::string name() {
    skip_ws();
    if (!eof() && (is_lower(peek()) || is_digit(peek()))) return read_word();
    fail("clause names are lowercase words or numbers");
  }

  std::string role() {
    skip_ws();
    int l = line, c = col;
    if (eof() || !is_lower(peek())) fail("expected a role");
    std::string r = read_word();
    if (r == "conjecture")
      fail_at(l, c,
              "role conjecture is not allowed in clause form; "
              "use negated_conjecture");
    static const std::set<std::string> known = {
        "axiom",   "hypothesis", "definition", "assumption",        "lemma",
        "theorem", "corollary",  "plain",      "negated_conjecture"};
    if (!known.count(r)) fail_at(l, c, "unknown role '" + r + "'");
    return r;
  }

  std::optional<TptpClause> entry() {
    skip_ws();
    if (eof()) return std::nullopt;
    int l = line, c = col;
    char ch = peek();
    if (!is_ident(ch))
      fail(std::string("expected a cnf clause, found '") + ch + "'");
    std::string kw = read_word();
    if (kw == "include") fail_at(l, c, "include directives are not supported");
    if (kw == "fof" || kw == "tff" || kw == "thf" || kw == "tcf" || kw == "tpi")
      fail_at(l, c, "only cnf clauses are supported, found " + kw);
    if (kw != "cnf") fail_at(l, c, "expected a cnf clause, found '" + kw + "'");
    expect('(');
    TptpClause out;
    out.name = name();
    expect(',');
    out.role = role();
    expect(',');
    out.clause = formula();
    expect(')');
    expect('.');
    return out;
  }
};

}  // namespace

std::vector<Clause> TptpProblem::clause_list() const {
  std::vector<Clause> out;
  out.reserve(clauses.size());
  for (const TptpClause& c : clauses) out.push_back(c.clause);
  return out;
}

TptpProblem parse_tptp_cnf(const std::string& text) {
  Parser p(text);
  TptpProblem prob;
  while (auto e = p.entry()) prob.clauses.push_back(std::move(*e));
  return prob;
}

namespace {

void expect_consumed(Parser& p) {
  p.skip_ws();
  if (!p.eof()) p.fail("unexpected trailing text");
}

}  // namespace

Clause parse_clause_text(const std::string& text) {
  Parser p(text);
  Clause c = p.formula();
  expect_consumed(p);
  return c;
}

Literal parse_literal_text(const std::string& text) {
  Parser p(text);
  Literal l = p.literal();
  expect_consumed(p);
  return l;
}

Substitution parse_substitution_text(const std::string& text) {
  Parser p(text);
  Substitution s;
  p.expect('{');
  if (!p.try_consume('}')) {
    do {
      p.skip_ws();
      if (p.eof() || !(is_upper(p.peek()) || p.peek() == '_'))
        p.fail("expected a variable");
      int l = p.line, c = p.col;
      std::string v = p.read_word();
      p.expect('/');
      if (s.lookup(v) != nullptr)
        Parser::fail_at(l, c, "variable " + v + " is bound twice");
      Term t = p.term();
      if (t == Term::var(v))
        Parser::fail_at(l, c, "identity binding for " + v);
      s.bind(v, t);
    } while (p.try_consume(','));
    p.expect('}');
  }
  expect_consumed(p);
  return s;
}

TptpProblem parse_tptp_cnf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tptp_cnf(ss.str());
}

std::string tptp_line(const std::string& name, const std::string& role,
                      const Clause& c) {
  return "cnf(" + name + ", " + role + ", ( " + c.to_string() + " )).";
}

std::string to_tptp(const std::vector<Clause>& problem) {
  std::string out;
  for (size_t i = 0; i < problem.size(); ++i)
    out += tptp_line("c" + std::to_string(i + 1), "axiom", problem[i]) + "\n";
  return out;
}

}  // namespace crkit
