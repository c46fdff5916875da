#pragma once

#include <string>
#include <vector>

#include "dsalign/diagnostic.hpp"
#include "dsalign/model.hpp"
#include "dsalign/taxonomy.hpp"

namespace dsalign {

namespace detail {

inline std::optional<LeafGroup> leaf_group_for_attr(ElementKind kind, std::string_view key) {
  if (key == "yields_user_value") return LeafGroup::UserValue;
  if (key == "yields_quality_value") return LeafGroup::QualityValue;
  if (key == "yields_business_value") return LeafGroup::BusinessValue;
  if (key == "implies_cost") return LeafGroup::Cost;
  if (key == "hinders") return LeafGroup::Risk;
  if (key == "category") {
    switch (kind) {
      case ElementKind::UserValue: return LeafGroup::UserValue;
      case ElementKind::QualityValue: return LeafGroup::QualityValue;
      case ElementKind::BusinessValue: return LeafGroup::BusinessValue;
      case ElementKind::CostItem: return LeafGroup::Cost;
      case ElementKind::RiskItem:
      case ElementKind::Principle: return LeafGroup::Risk;
      default: return std::nullopt;
    }
  }
  return std::nullopt;
}

inline bool has_relation(const AlignmentModel& m, const std::string& id, RelationKind kind,
                         bool outgoing, std::initializer_list<ElementKind> other_kinds) {
  for (const auto& r : m.relations()) {
    if (r.kind != kind) continue;
    const std::string* other = nullptr;
    if (outgoing || !is_directed(kind)) {
      if (r.source == id) other = &r.target;
    }
    if (!other && (!outgoing || !is_directed(kind))) {
      if (r.target == id) other = &r.source;
    }
    if (!other) continue;
    const Element* e = m.find(*other);
    if (!e) continue;
    for (auto k : other_kinds) {
      if (e->kind == k) return true;
    }
  }
  return false;
}

inline void check_attrs(const Element& e, std::vector<Diagnostic>& out) {
  std::vector<std::string> seen_single;
  for (const auto& a : e.attrs) {
    if (!is_attr_allowed(e.kind, a.key)) {
      out.push_back(make_error("E002",
                               "attribute '" + a.key + "' is not allowed on " +
                                   std::string(to_string(e.kind)),
                               e.id));
      continue;
    }
    if (is_single_valued_attr(a.key)) {
      if (std::find(seen_single.begin(), seen_single.end(), a.key) != seen_single.end()) {
        out.push_back(make_error("E107", "attribute '" + a.key + "' declared more than once", e.id));
      }
      seen_single.push_back(a.key);
    }
    if (auto group = leaf_group_for_attr(e.kind, a.key)) {
      bool ok = a.key == "category" ? parse_leaf(a.value) && group_of(*parse_leaf(a.value)) == *group
                                    : parse_leaf_in(*group, a.value).has_value();
      if (!ok) {
        out.push_back(make_error("E120", "'" + a.value + "' is not a valid leaf for '" + a.key + "'",
                                 e.id));
      }
    } else if (a.key == "runs_on" && !is_runs_on_value(a.value)) {
      out.push_back(make_error("E121", "runs_on must be server, device, external_api or browser",
                               e.id));
    } else if (a.key == "severity" && !parse_risk_level(a.value)) {
      out.push_back(make_error("E121", "severity must be low, medium or high", e.id));
    }
  }
}

}  // namespace detail

// All findings for `model`; no error-level entry means the model is a
// well-formed input for derivation.
//
//   V1 E010  every SystemComponent realizes a ComponentFunction
//   V2 E011  every ObservedEvent is associated with a component, function or data
//   V3 W101  every ObservedEvent implies a cost or hinders a principle
//   V4 W102  every OperatorActivity yields a business value
//   V5 W103  every UserActivity is served by a DialogueService
//   V6 W104  every DataModel is accessed by a SystemComponent
//   V7 E002  attribute keys on the per-kind allowlist (plus E107/E120/E121 on values)
//   V8 E004  relation triples in the permitted-connections table (W105 for fallback)
inline std::vector<Diagnostic> validate(const AlignmentModel& model) {
  using detail::has_relation;
  std::vector<Diagnostic> out;

  for (const auto& e : model.elements()) {
    if (!is_valid_id(e.id)) {
      out.push_back(make_error("E005", "identifier '" + e.id + "' must match [a-z][a-z0-9_]*", e.id));
    }
    detail::check_attrs(e, out);

    switch (e.kind) {
      case ElementKind::SystemComponent:
        if (!has_relation(model, e.id, RelationKind::Realization, true,
                          {ElementKind::ComponentFunction})) {
          out.push_back(make_error("E010",
                                   "component '" + e.id + "' realizes no component function", e.id));
        }
        break;
      case ElementKind::ObservedEvent:
        if (!has_relation(model, e.id, RelationKind::Association, true,
                          {ElementKind::SystemComponent, ElementKind::ComponentFunction,
                           ElementKind::DataModel})) {
          out.push_back(make_error("E011",
                                   "event '" + e.id +
                                       "' is not associated with any component, function or data",
                                   e.id));
        }
        if (!e.attr("implies_cost") && !e.attr("hinders")) {
          out.push_back(make_warning("W101",
                                     "dangling event '" + e.id +
                                         "': it implies no cost and hinders no principle",
                                     e.id));
        }
        break;
      case ElementKind::OperatorActivity:
        if (!e.attr("yields_business_value")) {
          out.push_back(make_warning(
              "W102", "operator activity '" + e.id + "' yields no business value", e.id));
        }
        break;
      case ElementKind::UserActivity:
        if (!has_relation(model, e.id, RelationKind::Serving, false,
                          {ElementKind::DialogueService})) {
          out.push_back(make_warning(
              "W103", "user activity '" + e.id + "' is not served by any dialogue service", e.id));
        }
        break;
      case ElementKind::DataModel:
        if (!has_relation(model, e.id, RelationKind::Access, false,
                          {ElementKind::SystemComponent})) {
          out.push_back(make_warning(
              "W104", "data '" + e.id + "' is not accessed by any system component", e.id));
        }
        break;
      default:
        break;
    }
  }

  for (const auto& r : model.relations()) {
    const Element* s = model.find(r.source);
    const Element* t = model.find(r.target);
    if (!s || !t) {
      const std::string& missing = s ? r.target : r.source;
      out.push_back(make_error("E003", "relation " + r.id + " refers to unknown element '" +
                                           missing + "'",
                               r.id));
      continue;
    }
    switch (connection(s->kind, r.kind, t->kind)) {
      case Connection::Forbidden:
        out.push_back(make_error("E004",
                                 std::string(to_string(r.kind)) + " from " +
                                     std::string(to_string(s->kind)) + " '" + r.source + "' to " +
                                     std::string(to_string(t->kind)) + " '" + r.target +
                                     "' is not a permitted connection",
                                 r.id));
        break;
      case Connection::Fallback:
        out.push_back(make_warning("W105",
                                   "untyped association between " +
                                       std::string(to_string(s->kind)) + " '" + r.source +
                                       "' and " + std::string(to_string(t->kind)) + " '" +
                                       r.target + "'",
                                   r.id));
        break;
      case Connection::Permitted:
        break;
    }
  }
  return out;
}

}  // namespace dsalign
