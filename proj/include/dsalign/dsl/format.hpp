#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dsalign/diagnostic.hpp"
#include "dsalign/dsl/parse.hpp"
#include "dsalign/model.hpp"
#include "dsalign/validate.hpp"

namespace dsalign::dsl {

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c; break;
    }
  }
  out += '"';
  return out;
}

namespace detail {

// Which element prints a relation, and under which key.
struct Owner {
  std::string element;
  std::string key;  // empty for component -> function nesting
};

inline std::optional<Owner> owner_of(const AlignmentModel& m, const Relation& r) {
  const Element* s = m.find(r.source);
  const Element* t = m.find(r.target);
  if (!s || !t) return std::nullopt;
  switch (r.kind) {
    case RelationKind::Assignment: return Owner{r.target, "by"};
    case RelationKind::Serving: return Owner{r.source, "serves"};
    case RelationKind::Access: return Owner{r.source, "uses"};
    case RelationKind::Association: return Owner{r.source, "about"};
    case RelationKind::Influence:
      if (s->kind == ElementKind::UserActivity) return Owner{r.source, "influences"};
      return std::nullopt;
    case RelationKind::Realization:
      if (s->kind == ElementKind::SystemComponent) return Owner{r.source, ""};
      if (t->kind == ElementKind::DialogueService) return Owner{r.target, "realized_by"};
      return std::nullopt;
    case RelationKind::Aggregation: return std::nullopt;
  }
  return std::nullopt;
}

[[noreturn]] inline void inexpressible(const std::string& message, const std::string& subject) {
  throw ModelError(make_error("E150", message, subject));
}

class Printer {
 public:
  explicit Printer(const AlignmentModel& m) : m_(m) {
    for (const auto& e : m.elements()) {
      if (is_motivation_kind(e.kind)) {
        inexpressible("derived element '" + e.id + "' has no .dsa form; format the model before attach",
                      e.id);
      }
    }
    for (const auto& r : m.relations()) {
      auto owner = owner_of(m, r);
      if (!owner) inexpressible("relation " + r.id + " has no .dsa form", r.id);
      if (owner->key.empty()) {
        if (realizer_.count(r.target)) {
          inexpressible("function '" + r.target + "' is realized by more than one component", r.target);
        }
        realizer_[r.target] = r.source;
        nested_[r.source].push_back(r.target);
        continue;
      }
      const std::string& other = owner->element == r.source ? r.target : r.source;
      refs_[owner->element][owner->key].push_back(other);
    }
    for (const auto& e : m.elements()) {
      if (e.kind == ElementKind::ComponentFunction && !realizer_.count(e.id)) {
        inexpressible("function '" + e.id + "' is not realized by any component", e.id);
      }
    }
  }

  std::string run() {
    out_ += "system " + quote(m_.system_name()) + " {\n";
    bool previous_had_block = false;
    bool first = true;
    for (const auto& e : m_.elements()) {
      if (e.kind == ElementKind::ComponentFunction) continue;
      bool block = has_block(e);
      if (!first && (block || previous_had_block)) out_ += '\n';
      print_element(e, 1);
      previous_had_block = block;
      first = false;
    }
    out_ += "}\n";
    return std::move(out_);
  }

 private:
  bool has_block(const Element& e) const {
    return !e.description.empty() || !e.attrs.empty() || refs_.count(e.id) || nested_.count(e.id);
  }

  void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

  void print_element(const Element& e, int depth) {
    indent(depth);
    out_ += std::string(statement_keyword(e.kind)) + " " + e.id + " " + quote(e.name);
    if (!has_block(e)) {
      out_ += ";\n";
      return;
    }
    out_ += " {\n";
    auto ref_it = refs_.find(e.id);
    for (auto key : block_keys(e.kind)) {
      if (key == "description") {
        if (!e.description.empty()) {
          indent(depth + 1);
          out_ += "description: " + quote(e.description) + ";\n";
        }
        continue;
      }
      if (is_reference_key(key)) {
        if (ref_it == refs_.end()) continue;
        auto list = ref_it->second.find(std::string(key));
        if (list == ref_it->second.end()) continue;
        indent(depth + 1);
        out_ += std::string(key) + ": ";
        for (std::size_t i = 0; i < list->second.size(); ++i) {
          if (i) out_ += ", ";
          out_ += list->second[i];
        }
        out_ += ";\n";
        continue;
      }
      for (const auto* a : e.attrs_with(key)) print_attr(*a, depth + 1);
    }
    if (auto fns = nested_.find(e.id); fns != nested_.end()) {
      for (const auto& fn : fns->second) print_element(*m_.find(fn), depth + 1);
    }
    indent(depth);
    out_ += "}\n";
  }

  void print_attr(const Attribute& a, int depth) {
    indent(depth);
    out_ += a.key + ": ";
    if (a.key == "role") {
      out_ += quote(a.value) + ";\n";
      return;
    }
    if (a.key == "implies_cost") {
      auto leaf = parse_cost_leaf(a.value);
      out_ += leaf ? std::string(cost_short_name(*leaf)) : a.value;
    } else {
      out_ += a.value;
    }
    if (a.key == "hinders") {
      out_ += " severity: ";
      out_ += to_string(a.severity.value_or(RiskLevel::Medium));
    }
    if (!a.text.empty()) out_ += " " + quote(a.text);
    out_ += ";\n";
  }

  const AlignmentModel& m_;
  std::string out_;
  std::map<std::string, std::string> realizer_;
  std::map<std::string, std::vector<std::string>> nested_;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> refs_;
};

}  // namespace detail

// Canonical `.dsa` text: two-space indent, elements in model order (functions
// nested in their component), block entries in allowlist order, LF endings.
// Throws ModelError when the model has validation errors (first error) or
// contains something the syntax cannot express (E150).
inline std::string format(const AlignmentModel& model) {
  for (const auto& d : validate(model)) {
    if (d.is_error()) throw ModelError(d);
  }
  return detail::Printer(model).run();
}

}  // namespace dsalign::dsl
