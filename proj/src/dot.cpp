#include "crkit/dot.hpp"

namespace crkit {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string node_line(const std::string& name, const std::string& label,
                      const std::string& shape) {
  return "  " + name + " [label=\"" + escape(label) + "\", shape=" + shape +
         "];\n";
}

std::string edge(int from, int to, const char* attrs = nullptr) {
  std::string e =
      "  n" + std::to_string(from) + " -> n" + std::to_string(to);
  if (attrs) e += std::string(" [") + attrs + "]";
  return e + ";\n";
}

}  // namespace

std::string to_dot(const CrDerivation& d) {
  std::string out = "digraph cr {\n";
  for (const CrNode& n : d.nodes()) {
    std::string shape = "ellipse";
    switch (n.kind) {
      case RuleKind::Input: shape = "box"; break;
      case RuleKind::Decision: shape = "diamond"; break;
      case RuleKind::Conflict: shape = "doubleoctagon"; break;
      case RuleKind::ClauseLearn: shape = "hexagon"; break;
      case RuleKind::Upr: break;
    }
    out += node_line("n" + std::to_string(n.id),
                     std::to_string(n.id) + ": " + rule_name(n.kind) + "\n" +
                         n.conclusion.to_string(),
                     shape);
  }
  for (const CrNode& n : d.nodes()) {
    for (int p : d.premises(n.id)) out += edge(p, n.id);
    if (n.kind == RuleKind::ClauseLearn)
      for (int dec : n.discharged) out += edge(dec, n.id, "style=dashed");
  }
  return out + "}\n";
}

std::string to_dot(const ResDerivation& d) {
  std::string out = "digraph res {\n";
  for (const ResNode& n : d.nodes()) {
    std::string shape = n.kind == ResKind::Input ? "box" : "ellipse";
    out += node_line("n" + std::to_string(n.id),
                     std::to_string(n.id) + ": " + res_rule_name(n.kind) +
                         "\n" + n.conclusion.to_string(),
                     shape);
  }
  for (const ResNode& n : d.nodes())
    for (int p : d.premises(n.id)) out += edge(p, n.id);
  return out + "}\n";
}

std::string to_dot(const CndDerivation& d) {
  std::string out = "digraph cnd {\n";
  for (const CndNode& n : d.nodes()) {
    std::string shape = "ellipse";
    if (n.rule == CndRule::Axiom) shape = "box";
    if (n.rule == CndRule::Assumption) shape = "diamond";
    std::string label =
        std::to_string(n.id) + ": " + rule_name(n.rule) + "\n" +
        n.conclusion.to_string();
    if (n.rule == CndRule::NegIntro || n.rule == CndRule::ImpIntro)
      label += "\ndischarges " + n.assumption.to_string();
    out += node_line("n" + std::to_string(n.id), label, shape);
  }
  for (const CndNode& n : d.nodes())
    for (int p : n.premises) out += edge(p, n.id);
  return out + "}\n";
}

std::string to_dot(const ImplicationGraph& g) {
  std::string out = "digraph trail {\n";
  for (const GraphVertex& v : g.vertices) {
    std::string label = std::to_string(v.id) + ": " + v.literal.to_string();
    if (v.reason >= 0 && static_cast<size_t>(v.reason) < g.clauses.size())
      label += "\n[" + g.clauses[static_cast<size_t>(v.reason)].to_string() + "]";
    out += node_line("n" + std::to_string(v.id), label,
                     v.is_decision ? "diamond" : "ellipse");
  }
  out += node_line("conflict", "conflict", "doubleoctagon");
  for (const GraphVertex& v : g.vertices)
    for (int p : v.premises) out += edge(p, v.id);
  if (g.conflict_left >= 0)
    out += "  n" + std::to_string(g.conflict_left) + " -> conflict;\n";
  if (g.conflict_right >= 0)
    out += "  n" + std::to_string(g.conflict_right) + " -> conflict;\n";
  return out + "}\n";
}

}  // namespace crkit
