#include "crkit/certificate.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include "crkit/error.hpp"

namespace crkit {

namespace {

uint64_t fnv1a(const std::string& s, uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool var_name_ok(const Symbol& v) {
  return !v.empty() &&
         (std::isupper(static_cast<unsigned char>(v[0])) || v[0] == '_');
}

bool fn_name_ok(const Symbol& f) {
  return !f.empty() && std::islower(static_cast<unsigned char>(f[0]));
}

void require_term_names(const Term& t) {
  if (t.is_var()) {
    if (!var_name_ok(t.symbol()))
      throw CrError(Err::not_serializable, "variable name '" + t.symbol() +
                                               "' cannot be written back");
    return;
  }
  if (!fn_name_ok(t.symbol()))
    throw CrError(Err::not_serializable,
                  "function name '" + t.symbol() + "' cannot be written back");
  for (const Term& a : t.args()) require_term_names(a);
}

void require_literal_names(const Literal& l) {
  if (l.is_prop_const()) return;
  if (!fn_name_ok(l.pred()))
    throw CrError(Err::not_serializable,
                  "predicate name '" + l.pred() + "' cannot be written back");
  for (const Term& a : l.args()) require_term_names(a);
}

void require_clause_names(const Clause& c) {
  for (const Literal& l : c.literals()) require_literal_names(l);
}

void require_subst_names(const Substitution& s) {
  for (const auto& [v, t] : s.bindings()) {
    if (!var_name_ok(v))
      throw CrError(Err::not_serializable,
                    "variable name '" + v + "' cannot be written back");
    require_term_names(t);
  }
}

Substitution renaming_from(const std::map<Symbol, Symbol>& vm) {
  Substitution r;
  for (const auto& [from, to] : vm)
    if (from != to) r.bind(from, Term::var(to));
  return r;
}

// Recomputes each node's renaming by positionally matching the raw
// conclusion (rebuilt from the premises and sigma, mirroring the checker)
// against the stored one. Nodes whose raw form cannot be computed keep the
// identity renaming and are left for the checker to flag.
void reconstruct_cr_renamings(std::vector<CrNode>& nodes) {
  for (size_t i = 0; i < nodes.size(); ++i) {
    CrNode& n = nodes[i];
    std::optional<Clause> pre;
    try {
      if (n.kind == RuleKind::Upr) {
        if (n.clause_premise >= 0 && n.clause_premise < static_cast<int>(i)) {
          const Clause& c = nodes[n.clause_premise].conclusion;
          if (n.propagated_position < c.size())
            pre = Clause{n.sigma.apply(c.lit(n.propagated_position))};
        }
      } else if (n.kind == RuleKind::ClauseLearn) {
        bool refs_ok = n.bottom >= 0 && n.bottom < static_cast<int>(i);
        for (int dec : n.discharged)
          refs_ok = refs_ok && dec >= 0 && dec < static_cast<int>(i) &&
                    nodes[dec].kind == RuleKind::Decision;
        if (refs_ok) {
          CrDerivation prefix = CrDerivation::from_nodes(
              std::vector<CrNode>(nodes.begin(), nodes.begin() + i));
          std::vector<Literal> lits;
          for (int dec : n.discharged) {
            Literal base = dual(prefix.unit_of(dec));
            std::vector<Literal> seen;
            for (const Substitution& s :
                 prefix.path_substitutions(dec, n.bottom)) {
              Literal inst = s.apply(base);
              if (std::find(seen.begin(), seen.end(), inst) == seen.end()) {
                seen.push_back(inst);
                lits.push_back(inst);
              }
            }
          }
          pre = Clause(std::move(lits));
        }
      }
    } catch (const CrError&) {
      pre.reset();
    }
    if (!pre) continue;
    if (auto vm = positional_variant_map(*pre, n.conclusion))
      n.renaming = renaming_from(*vm);
  }
}

void reconstruct_res_renamings(std::vector<ResNode>& nodes) {
  for (size_t i = 0; i < nodes.size(); ++i) {
    ResNode& n = nodes[i];
    std::optional<Clause> pre;
    if (n.kind == ResKind::Resolution) {
      if (n.left >= 0 && n.left < static_cast<int>(i) && n.right >= 0 &&
          n.right < static_cast<int>(i)) {
        const Clause& lc = nodes[n.left].conclusion;
        const Clause& rc = nodes[n.right].conclusion;
        if (n.left_pos < lc.size() && n.right_pos < rc.size()) {
          std::vector<Literal> lits;
          for (size_t j = 0; j < lc.size(); ++j)
            if (j != n.left_pos) lits.push_back(n.sigma.apply(lc.lit(j)));
          for (size_t j = 0; j < rc.size(); ++j)
            if (j != n.right_pos) lits.push_back(n.sigma.apply(rc.lit(j)));
          pre = Clause(std::move(lits));
        }
      }
    } else if (n.kind == ResKind::Factoring) {
      if (n.premise >= 0 && n.premise < static_cast<int>(i) &&
          !n.group.empty()) {
        const Clause& c = nodes[n.premise].conclusion;
        bool in_range = true;
        for (size_t g : n.group) in_range = in_range && g < c.size();
        if (in_range) {
          std::vector<Literal> lits;
          for (size_t j = 0; j < c.size(); ++j) {
            if (j != n.group[0] &&
                std::find(n.group.begin(), n.group.end(), j) != n.group.end())
              continue;
            lits.push_back(n.sigma.apply(c.lit(j)));
          }
          pre = Clause(std::move(lits));
        }
      }
    }
    if (!pre) continue;
    if (auto vm = positional_variant_map(*pre, n.conclusion))
      n.renaming = renaming_from(*vm);
  }
}

// One certificate line already split into head tokens and the clause text
// after the " : " marker.
struct NodeLine {
  int line = 0;
  std::vector<std::string> head;
  Clause clause;
};

// Cursor over a node line's head tokens.
struct Toks {
  const NodeLine& nl;
  size_t k = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(nl.line, 1, msg);
  }

  const std::string& next(const std::string& what) {
    if (k >= nl.head.size()) fail("expected " + what);
    return nl.head[k++];
  }

  void keyword(const std::string& kw) {
    const std::string& t = next("'" + kw + "'");
    if (t != kw) fail("expected '" + kw + "', found '" + t + "'");
  }

  static bool numeric(const std::string& t) {
    size_t s = t.size() > 1 && t[0] == '-' ? 1 : 0;
    if (s >= t.size() || t.size() - s > 18) return false;
    for (size_t i = s; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  }

  long number(const std::string& what) {
    const std::string& t = next(what);
    if (!numeric(t)) fail("expected " + what + ", found '" + t + "'");
    return std::stol(t);
  }

  // Reads numbers until the next token is not numeric (or the head ends).
  std::vector<long> numbers() {
    std::vector<long> out;
    while (k < nl.head.size() && numeric(nl.head[k])) out.push_back(std::stol(nl.head[k++]));
    return out;
  }

  Substitution subst() {
    keyword("sigma");
    const std::string& t = next("a substitution");
    try {
      return parse_substitution_text(t);
    } catch (const ParseError& e) {
      fail("in substitution: " + e.message());
    }
  }

  Literal literal(const std::string& what) {
    const std::string& t = next(what);
    try {
      return parse_literal_text(t);
    } catch (const ParseError& e) {
      fail("in " + what + ": " + e.message());
    }
  }

  void done() {
    if (k < nl.head.size()) fail("unexpected token '" + nl.head[k] + "'");
  }
};

std::vector<size_t> to_positions(const std::vector<long>& v, const Toks& t,
                                 const std::string& what) {
  std::vector<size_t> out;
  for (long x : v) {
    if (x < 0) t.fail(what + " cannot be negative");
    out.push_back(static_cast<size_t>(x));
  }
  return out;
}

std::vector<int> to_ids(const std::vector<long>& v) {
  return std::vector<int>(v.begin(), v.end());
}

CrDerivation parse_cr_nodes(const std::vector<NodeLine>& lines) {
  std::vector<CrNode> nodes;
  for (const NodeLine& nl : lines) {
    Toks t{nl};
    CrNode n;
    n.conclusion = nl.clause;
    const std::string& rule = t.next("a rule");
    if (rule == "input") {
      n.kind = RuleKind::Input;
    } else if (rule == "decide") {
      n.kind = RuleKind::Decision;
    } else if (rule == "upr") {
      n.kind = RuleKind::Upr;
      t.keyword("units");
      n.units = to_ids(t.numbers());
      t.keyword("clause");
      n.clause_premise = static_cast<int>(t.number("a clause premise id"));
      t.keyword("pos");
      n.clause_positions = to_positions(t.numbers(), t, "a clause position");
      t.keyword("prop");
      long pp = t.number("the propagated position");
      if (pp < 0) t.fail("the propagated position cannot be negative");
      n.propagated_position = static_cast<size_t>(pp);
      n.sigma = t.subst();
    } else if (rule == "conflict") {
      n.kind = RuleKind::Conflict;
      n.left = static_cast<int>(t.number("the left premise id"));
      n.right = static_cast<int>(t.number("the right premise id"));
      n.sigma = t.subst();
    } else if (rule == "learn") {
      n.kind = RuleKind::ClauseLearn;
      t.keyword("bottom");
      n.bottom = static_cast<int>(t.number("the refuted node id"));
      t.keyword("discharge");
      n.discharged = to_ids(t.numbers());
      n.cl_index = static_cast<int>(n.discharged.size());
    } else {
      t.fail("unknown rule '" + rule + "'");
    }
    t.done();
    nodes.push_back(std::move(n));
  }
  reconstruct_cr_renamings(nodes);
  return CrDerivation::from_nodes(std::move(nodes));
}

ResDerivation parse_res_nodes(const std::vector<NodeLine>& lines) {
  std::vector<ResNode> nodes;
  for (const NodeLine& nl : lines) {
    Toks t{nl};
    ResNode n;
    n.conclusion = nl.clause;
    const std::string& rule = t.next("a rule");
    if (rule == "input") {
      n.kind = ResKind::Input;
    } else if (rule == "resolve") {
      n.kind = ResKind::Resolution;
      n.left = static_cast<int>(t.number("the left premise id"));
      n.right = static_cast<int>(t.number("the right premise id"));
      t.keyword("at");
      long lp = t.number("the left position");
      long rp = t.number("the right position");
      if (lp < 0 || rp < 0) t.fail("positions cannot be negative");
      n.left_pos = static_cast<size_t>(lp);
      n.right_pos = static_cast<size_t>(rp);
      n.sigma = t.subst();
    } else if (rule == "factor") {
      n.kind = ResKind::Factoring;
      n.premise = static_cast<int>(t.number("the premise id"));
      t.keyword("group");
      n.group = to_positions(t.numbers(), t, "a group position");
      n.sigma = t.subst();
    } else {
      t.fail("unknown rule '" + rule + "'");
    }
    t.done();
    nodes.push_back(std::move(n));
  }
  reconstruct_res_renamings(nodes);
  return ResDerivation::from_nodes(std::move(nodes));
}

CndDerivation parse_cnd_nodes(const std::vector<NodeLine>& lines) {
  std::vector<CndNode> nodes;
  for (const NodeLine& nl : lines) {
    Toks t{nl};
    CndNode n;
    n.conclusion = nl.clause;
    const std::string& rule = t.next("a rule");
    if (rule == "axiom") {
      n.rule = CndRule::Axiom;
    } else if (rule == "assume") {
      n.rule = CndRule::Assumption;
      n.assumption = t.literal("the assumed literal");
    } else if (rule == "impelim" || rule == "negelim") {
      n.rule = rule == "impelim" ? CndRule::ImpElim : CndRule::NegElim;
      n.premises.push_back(static_cast<int>(t.number("the first premise id")));
      n.premises.push_back(static_cast<int>(t.number("the second premise id")));
    } else if (rule == "negintro" || rule == "impintro") {
      n.rule = rule == "negintro" ? CndRule::NegIntro : CndRule::ImpIntro;
      n.premises.push_back(static_cast<int>(t.number("the body id")));
      t.keyword("discharge");
      n.assumption = t.literal("the discharged literal");
    } else if (rule == "allelim" || rule == "allintro") {
      n.rule = rule == "allelim" ? CndRule::AllElim : CndRule::AllIntro;
      n.premises.push_back(static_cast<int>(t.number("the body id")));
      n.sigma = t.subst();
    } else {
      t.fail("unknown rule '" + rule + "'");
    }
    t.done();
    for (int p : n.premises)
      if (p < 0 || p >= static_cast<int>(nodes.size()))
        t.fail("premise id " + std::to_string(p) + " must name an earlier node");
    nodes.push_back(std::move(n));
  }
  return CndDerivation::from_nodes(std::move(nodes));
}

std::string head_of(const CrNode& n) {
  std::string head;
  switch (n.kind) {
    case RuleKind::Input:
      return "input";
    case RuleKind::Decision:
      return "decide";
    case RuleKind::Upr: {
      head = "upr units";
      for (int u : n.units) head += " " + std::to_string(u);
      head += " clause " + std::to_string(n.clause_premise) + " pos";
      for (size_t p : n.clause_positions) head += " " + std::to_string(p);
      head += " prop " + std::to_string(n.propagated_position);
      head += " sigma " + n.sigma.to_string();
      return head;
    }
    case RuleKind::Conflict:
      return "conflict " + std::to_string(n.left) + " " +
             std::to_string(n.right) + " sigma " + n.sigma.to_string();
    case RuleKind::ClauseLearn: {
      head = "learn bottom " + std::to_string(n.bottom) + " discharge";
      for (int dec : n.discharged) head += " " + std::to_string(dec);
      return head;
    }
  }
  return head;
}

std::string head_of(const ResNode& n) {
  std::string head;
  switch (n.kind) {
    case ResKind::Input:
      return "input";
    case ResKind::Resolution:
      return "resolve " + std::to_string(n.left) + " " +
             std::to_string(n.right) + " at " + std::to_string(n.left_pos) +
             " " + std::to_string(n.right_pos) + " sigma " +
             n.sigma.to_string();
    case ResKind::Factoring: {
      head = "factor " + std::to_string(n.premise) + " group";
      for (size_t g : n.group) head += " " + std::to_string(g);
      head += " sigma " + n.sigma.to_string();
      return head;
    }
  }
  return head;
}

std::string head_of(const CndNode& n) {
  switch (n.rule) {
    case CndRule::Axiom:
      return "axiom";
    case CndRule::Assumption:
      return "assume " + n.assumption.to_string();
    case CndRule::ImpElim:
      return "impelim " + std::to_string(n.premises[0]) + " " +
             std::to_string(n.premises[1]);
    case CndRule::NegElim:
      return "negelim " + std::to_string(n.premises[0]) + " " +
             std::to_string(n.premises[1]);
    case CndRule::NegIntro:
      return "negintro " + std::to_string(n.premises[0]) + " discharge " +
             n.assumption.to_string();
    case CndRule::ImpIntro:
      return "impintro " + std::to_string(n.premises[0]) + " discharge " +
             n.assumption.to_string();
    case CndRule::AllElim:
      return "allelim " + std::to_string(n.premises[0]) + " sigma " +
             n.sigma.to_string();
    case CndRule::AllIntro:
      return "allintro " + std::to_string(n.premises[0]) + " sigma " +
             n.sigma.to_string();
  }
  return "";
}

}  // namespace

uint64_t problem_digest(const std::vector<Clause>& problem) {
  uint64_t h = 14695981039346656037ULL;
  for (const Clause& c : problem) h = fnv1a(c.to_string() + "\n", h);
  return h;
}

std::string digest_hex(uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

std::string to_string(CertCalculus c) {
  switch (c) {
    case CertCalculus::Cr: return "cr";
    case CertCalculus::Res: return "res";
    case CertCalculus::Cnd: return "cnd";
  }
  return "";
}

std::string write_certificate(const CrDerivation& d, uint64_t digest) {
  std::string out = "cert cr problem " + digest_hex(digest) + "\n";
  for (const CrNode& n : d.nodes()) {
    require_clause_names(n.conclusion);
    require_subst_names(n.sigma);
    out += "node " + std::to_string(n.id) + " " + head_of(n) + " : " +
           n.conclusion.to_string() + "\n";
  }
  return out;
}

std::string write_certificate(const ResDerivation& d, uint64_t digest) {
  std::string out = "cert res problem " + digest_hex(digest) + "\n";
  for (const ResNode& n : d.nodes()) {
    require_clause_names(n.conclusion);
    require_subst_names(n.sigma);
    out += "node " + std::to_string(n.id) + " " + head_of(n) + " : " +
           n.conclusion.to_string() + "\n";
  }
  return out;
}

std::string write_certificate(const CndDerivation& d, uint64_t digest) {
  std::string out = "cert cnd problem " + digest_hex(digest) + "\n";
  for (const CndNode& n : d.nodes()) {
    require_clause_names(n.conclusion);
    require_subst_names(n.sigma);
    if (n.rule == CndRule::Assumption || n.rule == CndRule::NegIntro ||
        n.rule == CndRule::ImpIntro)
      require_literal_names(n.assumption);
    out += "node " + std::to_string(n.id) + " " + head_of(n) + " : " +
           n.conclusion.to_string() + "\n";
  }
  return out;
}

ParsedCertificate parse_certificate(const std::string& text) {
  // Meaningful lines with their 1-based numbers; blanks and '%' lines drop.
  std::vector<std::pair<int, std::string>> lines;
  {
    int ln = 1;
    size_t start = 0;
    while (start <= text.size()) {
      size_t end = text.find('\n', start);
      std::string line = text.substr(
          start, end == std::string::npos ? std::string::npos : end - start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      size_t first = line.find_first_not_of(" \t");
      if (first != std::string::npos && line[first] != '%')
        lines.emplace_back(ln, line.substr(first));
      if (end == std::string::npos) break;
      start = end + 1;
      ++ln;
    }
  }
  if (lines.empty()) throw ParseError(1, 1, "empty certificate");

  ParsedCertificate out;
  {
    std::istringstream hs(lines[0].second);
    int hline = lines[0].first;
    std::string kw, cal, pk, dg, extra;
    hs >> kw >> cal >> pk >> dg;
    if (kw != "cert")
      throw ParseError(hline, 1, "a certificate starts with a cert line");
    if (cal == "cr")
      out.calculus = CertCalculus::Cr;
    else if (cal == "res")
      out.calculus = CertCalculus::Res;
    else if (cal == "cnd")
      out.calculus = CertCalculus::Cnd;
    else
      throw ParseError(hline, 6, "unknown calculus '" + cal + "'");
    if (pk != "problem" || dg.empty())
      throw ParseError(hline, 1, "expected: problem <digest>");
    if (hs >> extra)
      throw ParseError(hline, 1, "unexpected token '" + extra + "'");
    if (dg.size() != 16 ||
        dg.find_first_not_of("0123456789abcdef") != std::string::npos)
      throw ParseError(hline, 1, "the digest is 16 lowercase hex digits");
    out.digest = std::stoull(dg, nullptr, 16);
  }

  std::vector<NodeLine> nodes;
  for (size_t i = 1; i < lines.size(); ++i) {
    int ln = lines[i].first;
    const std::string& line = lines[i].second;
    size_t sep = line.find(" : ");
    if (sep == std::string::npos)
      throw ParseError(ln, 1, "a node line needs ' : ' before its clause");
    NodeLine nl;
    nl.line = ln;
    std::istringstream hs(line.substr(0, sep));
    std::string tok;
    while (hs >> tok) nl.head.push_back(tok);
    if (nl.head.size() < 2 || nl.head[0] != "node")
      throw ParseError(ln, 1, "expected a node line");
    if (!Toks::numeric(nl.head[1]) ||
        std::stol(nl.head[1]) != static_cast<long>(nodes.size()))
      throw ParseError(ln, 6,
                       "node ids count up from 0; expected " +
                           std::to_string(nodes.size()));
    nl.head.erase(nl.head.begin(), nl.head.begin() + 2);
    std::string ctext = line.substr(sep + 3);
    try {
      nl.clause = parse_clause_text(ctext);
    } catch (const ParseError& e) {
      throw ParseError(ln, static_cast<int>(sep + 3) + e.col(), e.message());
    }
    nodes.push_back(std::move(nl));
  }

  switch (out.calculus) {
    case CertCalculus::Cr: out.cr = parse_cr_nodes(nodes); break;
    case CertCalculus::Res: out.res = parse_res_nodes(nodes); break;
    case CertCalculus::Cnd: out.cnd = parse_cnd_nodes(nodes); break;
  }
  return out;
}

ParsedCertificate parse_certificate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_certificate(ss.str());
}

}  // namespace crkit
