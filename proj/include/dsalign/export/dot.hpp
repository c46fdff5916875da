#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <utility>
#include <string>
#include <string_view>

#include "dsalign/export/options.hpp"
#include "dsalign/model.hpp"
#include "dsalign/taxonomy.hpp"

namespace dsalign::exporter {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': break;
      default: out += c; break;
    }
  }
  return out + "\"";
}

// Cluster a derived item belongs to; system-side elements and principles stay
// outside every cluster.
inline std::optional<Branch> cluster_of(ElementKind k) {
  switch (k) {
    case ElementKind::UserValue:
    case ElementKind::QualityValue:
    case ElementKind::BusinessValue: return Branch::Value;
    case ElementKind::RiskItem: return Branch::Risk;
    case ElementKind::CostItem: return Branch::Cost;
    default: return std::nullopt;
  }
}

// Graphviz digraph named after the system slug. Nodes are labeled
// "<kind>\n<name>"; derived items are grouped in value/risk/cost clusters;
// Association edges are drawn without arrowheads.
inline std::string to_dot(const AlignmentModel& model, const ExportOptions& opts = {}) {
  require_exportable(model);
  std::string graph = slugify(model.system_name());
  if (std::isdigit(static_cast<unsigned char>(graph[0]))) graph = dot_quote(graph);
  std::string out = "digraph " + graph + " {\n";
  out += "  label=" + dot_quote(model.system_name()) + ";\n";
  out += "  node [shape=box];\n";

  auto node = [&](const Element& e, int depth) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += dot_quote(e.id) + " [label=" + dot_quote(std::string(to_string(e.kind)) + "\n" + e.name) +
           "];\n";
  };

  for (const auto& e : model.elements()) {
    if (exported(e, opts) && !cluster_of(e.kind)) node(e, 1);
  }
  static constexpr std::array<std::pair<Branch, std::string_view>, 3> clusters{
      {{Branch::Value, "Values"}, {Branch::Risk, "Risks"}, {Branch::Cost, "Costs"}}};
  for (const auto& [branch, title] : clusters) {
    bool open = false;
    for (const auto& e : model.elements()) {
      if (!exported(e, opts) || cluster_of(e.kind) != branch) continue;
      if (!open) {
        out += "  subgraph cluster_" + std::string(to_string(branch)) + " {\n";
        out += "    label=" + dot_quote(title) + ";\n";
        open = true;
      }
      node(e, 2);
    }
    if (open) out += "  }\n";
  }
  for (const auto& r : model.relations()) {
    if (!exported(model, r, opts)) continue;
    out += "  " + dot_quote(r.source) + " -> " + dot_quote(r.target) +
           " [label=" + dot_quote(to_string(r.kind));
    if (!is_directed(r.kind)) out += ", dir=none";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace dsalign::exporter
