// Command-line front end for the conflict-resolution toolkit.
//
// Subcommands:
//   prove          search a clause file for a refutation (exit 20 on unsat)
//   check          validate a certificate, optionally against a problem file
//   res2cr         translate a resolution certificate into the calculus
//   cr2cnd         translate a certificate into clausal natural deduction
//   split-combine  combine per-component refutations of a split clause
//   graph          render a conflict's implication graph
//
// Exit codes: 0 success (or unknown verdict), 1 usage / I/O / parse errors,
// 2 a well-formed request whose logical side failed (invalid certificate,
// digest mismatch, missing conflict, component mismatch), 20 proven unsat.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crkit/certificate.hpp"
#include "crkit/cnd.hpp"
#include "crkit/conflict_graph.hpp"
#include "crkit/dot.hpp"
#include "crkit/error.hpp"
#include "crkit/kernel.hpp"
#include "crkit/resolution.hpp"
#include "crkit/search.hpp"
#include "crkit/subst.hpp"
#include "crkit/term.hpp"
#include "crkit/tptp.hpp"
#include "crkit/transformers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUnsat = 20;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

/// Prints a checker's violations to stderr, one per line.
void report_violations(const crkit::CheckReport& report) {
  for (const auto& v : report.violations)
    std::cerr << "node " << v.node << ": " << v.what << "\n";
}

std::string classification_name(crkit::DerivationClass c) {
  switch (c) {
    case crkit::DerivationClass::Refutation: return "refutation";
    case crkit::DerivationClass::Proof: return "proof";
    default: return "derivation";
  }
}

/// Loads a certificate and insists on one calculus, exiting with a message
/// otherwise. `expect` is a to_string(CertCalculus) name.
crkit::ParsedCertificate load_certificate(const std::string& path,
                                          const std::string& expect) {
  crkit::ParsedCertificate cert = crkit::parse_certificate_file(path);
  if (!expect.empty() && crkit::to_string(cert.calculus) != expect)
    throw crkit::CrError(crkit::Err::bad_rule,
                         "expected a " + expect + " certificate, found " +
                             crkit::to_string(cert.calculus));
  return cert;
}

int run_prove(const std::string& problem_path, const crkit::SolverOptions& opts,
              const std::string& seed_text, const std::string& emit_path) {
  crkit::SolverOptions options = opts;
  if (!seed_text.empty())
    options.seed_decision = crkit::parse_literal_text(seed_text);
  crkit::TptpProblem problem = crkit::parse_tptp_cnf_file(problem_path);
  std::vector<crkit::Clause> clauses = problem.clause_list();

  crkit::SolveResult r = crkit::solve(clauses, options);
  std::cout << "verdict: " << crkit::to_string(r.kind) << "\n"
            << "reason: " << crkit::to_string(r.reason) << "\n"
            << "decisions: " << r.stats.decisions << "\n"
            << "propagations: " << r.stats.propagations << "\n"
            << "conflicts: " << r.stats.conflicts << "\n"
            << "max-level: " << r.stats.max_level << "\n"
            << "learned: " << r.learned.size() << "\n";
  if (r.kind != crkit::SolveKind::Unsat) return kExitOk;

  crkit::CrDerivation refutation = r.derivation.restrict_to(r.refutation).first;
  std::cout << "refutation-nodes: " << refutation.size() << "\n";
  if (!emit_path.empty()) {
    uint64_t digest = crkit::problem_digest(clauses);
    write_output(emit_path, crkit::write_certificate(refutation, digest));
  }
  return kExitUnsat;
}

int run_check(const std::string& cert_path, const std::string& problem_path,
              const std::string& calculus) {
  crkit::ParsedCertificate cert = load_certificate(cert_path, calculus);
  std::cout << "calculus: " << crkit::to_string(cert.calculus) << "\n"
            << "digest: " << crkit::digest_hex(cert.digest) << "\n";

  if (!problem_path.empty()) {
    crkit::TptpProblem problem = crkit::parse_tptp_cnf_file(problem_path);
    uint64_t expected = crkit::problem_digest(problem.clause_list());
    if (expected != cert.digest) {
      std::cerr << "problem digest " << crkit::digest_hex(expected)
                << " does not match the certificate\n";
      return kExitInvalid;
    }
  }

  crkit::CheckReport report;
  size_t nodes = 0;
  std::string conclusion;
  switch (cert.calculus) {
    case crkit::CertCalculus::Cr:
      report = crkit::check_derivation(cert.cr);
      nodes = cert.cr.size();
      conclusion = cert.cr.node(static_cast<int>(nodes) - 1).conclusion.to_string();
      break;
    case crkit::CertCalculus::Res:
      report = crkit::check_resolution(cert.res);
      nodes = cert.res.size();
      conclusion = cert.res.node(static_cast<int>(nodes) - 1).conclusion.to_string();
      break;
    case crkit::CertCalculus::Cnd:
      report = crkit::check_cnd(cert.cnd);
      nodes = cert.cnd.size();
      conclusion = cert.cnd.node(static_cast<int>(nodes) - 1).conclusion.to_string();
      break;
  }
  std::cout << "nodes: " << nodes << "\n"
            << "conclusion: " << conclusion << "\n";
  if (!report.ok) {
    report_violations(report);
    std::cout << "status: invalid\n";
    return kExitInvalid;
  }
  std::cout << "status: " << classification_name(report.classification) << "\n";
  return kExitOk;
}

int run_res2cr(const std::string& cert_path, const std::string& out_path,
               bool metrics) {
  crkit::ParsedCertificate cert = load_certificate(cert_path, "res");
  crkit::CheckReport report = crkit::check_resolution(cert.res);
  if (!report.ok) {
    report_violations(report);
    std::cerr << "the resolution certificate does not check\n";
    return kExitInvalid;
  }
  crkit::ResolutionTranslation t = crkit::resolution_to_cr(cert.res);
  if (metrics) {
    crkit::SimulationMetrics m = crkit::simulation_metrics(t);
    std::cerr << "inputs: " << m.inputs << "\n"
              << "resolutions: " << m.resolutions << "\n"
              << "factorings: " << m.factorings << "\n"
              << "unit-conflicts: " << m.unit_conflicts << "\n"
              << "length: " << m.length_cr << "\n"
              << "size: " << m.size_cr << "\n"
              << "size-estimate: " << m.size_estimate << "\n";
  }
  write_output(out_path, crkit::write_certificate(t.cr, cert.digest));
  return kExitOk;
}

int run_cr2cnd(const std::string& cert_path, const std::string& out_path) {
  crkit::ParsedCertificate cert = load_certificate(cert_path, "cr");
  crkit::CheckReport report = crkit::check_derivation(cert.cr);
  if (!report.ok) {
    report_violations(report);
    std::cerr << "the certificate does not check\n";
    return kExitInvalid;
  }
  crkit::CndDerivation nd = crkit::cr_to_cnd(cert.cr);
  write_output(out_path, crkit::write_certificate(nd, cert.digest));
  return kExitOk;
}

int run_split_combine(const std::string& problem_path, size_t clause_index,
                      const std::vector<std::string>& part_paths,
                      const std::string& out_path) {
  crkit::TptpProblem problem = crkit::parse_tptp_cnf_file(problem_path);
  std::vector<crkit::Clause> clauses = problem.clause_list();
  if (clause_index >= clauses.size())
    throw std::runtime_error("--clause " + std::to_string(clause_index) +
                             " is out of range; the problem has " +
                             std::to_string(clauses.size()) + " clauses");
  crkit::Clause long_clause = clauses[clause_index];
  std::vector<crkit::Clause> base;
  for (size_t i = 0; i < clauses.size(); ++i)
    if (i != clause_index) base.push_back(clauses[i]);

  std::vector<crkit::Clause> components = crkit::split_components(long_clause);
  if (components.size() != part_paths.size()) {
    std::cerr << "the clause splits into " << components.size()
              << " components but " << part_paths.size()
              << " refutations were given\n";
    return kExitInvalid;
  }

  std::vector<crkit::CrDerivation> parts;
  for (size_t i = 0; i < part_paths.size(); ++i) {
    crkit::ParsedCertificate cert = load_certificate(part_paths[i], "cr");
    crkit::CheckReport report = crkit::check_derivation(cert.cr);
    if (!report.ok ||
        report.classification != crkit::DerivationClass::Refutation) {
      report_violations(report);
      std::cerr << "part " << i << " ('" << part_paths[i]
                << "') is not a checked refutation\n";
      return kExitInvalid;
    }
    parts.push_back(cert.cr);
  }

  crkit::CrDerivation combined =
      crkit::combine_split_refutations(base, long_clause, parts);
  crkit::CheckReport report = crkit::check_derivation(combined);
  if (!report.ok ||
      report.classification != crkit::DerivationClass::Refutation) {
    report_violations(report);
    std::cerr << "the combined derivation does not check as a refutation\n";
    return kExitInvalid;
  }
  std::cerr << "combined-nodes: " << combined.size() << "\n";
  write_output(out_path, crkit::write_certificate(
                             combined, crkit::problem_digest(clauses)));
  return kExitOk;
}

int run_graph(const std::string& cert_path, std::optional<int> node, bool dot) {
  crkit::ParsedCertificate cert = load_certificate(cert_path, "cr");
  int conflict = -1;
  if (node) {
    conflict = *node;
    if (conflict < 0 || conflict >= static_cast<int>(cert.cr.size()) ||
        cert.cr.node(conflict).kind != crkit::RuleKind::Conflict) {
      std::cerr << "node " << conflict << " is not a conflict node\n";
      return kExitInvalid;
    }
  } else {
    for (int i = static_cast<int>(cert.cr.size()) - 1; i >= 0; --i)
      if (cert.cr.node(i).kind == crkit::RuleKind::Conflict) {
        conflict = i;
        break;
      }
    if (conflict < 0) {
      std::cerr << "the certificate contains no conflict node\n";
      return kExitInvalid;
    }
  }

  crkit::CrDerivation slice = crkit::conflict_slice(cert.cr, conflict);
  crkit::ImplicationGraph g = crkit::graph_from_cr(slice);
  if (dot) {
    std::cout << crkit::to_dot(g);
    return kExitOk;
  }
  std::cout << "conflict-node: " << conflict << "\n"
            << "vertices: " << g.vertices.size() << "\n"
            << "reason-clauses: " << g.clauses.size() << "\n";
  for (const auto& v : g.vertices) {
    std::cout << "  v" << v.id << ": " << v.literal.to_string();
    if (v.is_decision)
      std::cout << " (decision)";
    else
      std::cout << " [" << g.clauses[v.reason].to_string() << "]";
    std::cout << "\n";
  }
  std::cout << "clash: v" << g.conflict_left << " v" << g.conflict_right << "\n"
            << "learned: " << crkit::analyze_decisions(g).to_string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conflict-resolution calculus toolkit"};
  app.require_subcommand(1);

  // prove
  std::string prove_problem, prove_seed, prove_emit;
  crkit::SolverOptions prove_opts;
  CLI::App* prove = app.add_subcommand("prove", "Search a clause file");
  prove->add_option("problem", prove_problem, "clause file")->required();
  prove->add_option("--max-decisions", prove_opts.limits.max_decisions,
                    "decision depth bound");
  prove->add_option("--max-depth", prove_opts.limits.max_term_depth,
                    "propagated term depth bound");
  prove->add_option("--max-propagations", prove_opts.limits.max_propagations,
                    "unit propagation bound");
  prove->add_option("--max-conflicts", prove_opts.limits.max_conflicts,
                    "conflict bound");
  prove->add_option("--seed-decision", prove_seed,
                    "literal decided first, e.g. 'p(X)'");
  prove->add_option("--emit-cr", prove_emit,
                    "write the refutation certificate here");

  // check
  std::string check_cert, check_problem, check_calculus;
  CLI::App* check = app.add_subcommand("check", "Validate a certificate");
  check->add_option("certificate", check_cert, "certificate file")->required();
  check->add_option("--problem", check_problem,
                    "clause file the digest must match");
  check->add_option("--calculus", check_calculus, "require cr, res, or cnd")
      ->check(CLI::IsMember({"cr", "res", "cnd"}));

  // res2cr
  std::string res2cr_cert, res2cr_out;
  bool res2cr_metrics = false;
  CLI::App* res2cr = app.add_subcommand(
      "res2cr", "Translate a resolution certificate into the calculus");
  res2cr->add_option("certificate", res2cr_cert, "resolution certificate")
      ->required();
  res2cr->add_option("-o,--output", res2cr_out, "output file (default stdout)");
  res2cr->add_flag("--metrics", res2cr_metrics,
                   "print simulation step counts to stderr");

  // cr2cnd
  std::string cr2cnd_cert, cr2cnd_out;
  CLI::App* cr2cnd = app.add_subcommand(
      "cr2cnd", "Translate a certificate into clausal natural deduction");
  cr2cnd->add_option("certificate", cr2cnd_cert, "calculus certificate")
      ->required();
  cr2cnd->add_option("-o,--output", cr2cnd_out, "output file (default stdout)");

  // split-combine
  std::string split_problem, split_out;
  size_t split_clause = 0;
  std::vector<std::string> split_parts;
  CLI::App* split = app.add_subcommand(
      "split-combine", "Combine component refutations of a split clause");
  split->add_option("--problem", split_problem, "clause file")->required();
  split->add_option("--clause", split_clause,
                    "position of the clause to split (0-based)")
      ->required();
  split->add_option("parts", split_parts,
                    "one refutation certificate per component")
      ->required();
  split->add_option("-o,--output", split_out, "output file (default stdout)");

  // graph
  std::string graph_cert;
  int graph_node = -1;
  bool graph_dot = false;
  CLI::App* graph = app.add_subcommand(
      "graph", "Render a conflict's implication graph");
  graph->add_option("certificate", graph_cert, "calculus certificate")
      ->required();
  CLI::Option* graph_node_opt = graph->add_option(
      "--node", graph_node, "conflict node id (default: the last conflict)");
  graph->add_flag("--dot", graph_dot, "emit graphviz instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (prove->parsed())
      return run_prove(prove_problem, prove_opts, prove_seed, prove_emit);
    if (check->parsed())
      return run_check(check_cert, check_problem, check_calculus);
    if (res2cr->parsed())
      return run_res2cr(res2cr_cert, res2cr_out, res2cr_metrics);
    if (cr2cnd->parsed()) return run_cr2cnd(cr2cnd_cert, cr2cnd_out);
    if (split->parsed())
      return run_split_combine(split_problem, split_clause, split_parts,
                               split_out);
    if (graph->parsed())
      return run_graph(graph_cert,
                       graph_node_opt->count() ? std::optional<int>(graph_node)
                                               : std::nullopt,
                       graph_dot);
  } catch (const crkit::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const crkit::CrError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
