#pragma once

#include <algorithm>
#include <array>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dsalign/export/options.hpp"
#include "dsalign/model.hpp"

namespace dsalign::exporter {

// ArchiMate type for each element kind. Risk and cost items reuse Assessment
// and Value and are told apart by a `role` property.
constexpr std::string_view archimate_type(ElementKind k) {
  switch (k) {
    case ElementKind::User:
    case ElementKind::Operator: return "BusinessActor";
    case ElementKind::UserActivity:
    case ElementKind::OperatorActivity: return "BusinessProcess";
    case ElementKind::DialogueService: return "BusinessService";
    case ElementKind::SystemComponent: return "ApplicationComponent";
    case ElementKind::ComponentFunction: return "ApplicationFunction";
    case ElementKind::DataModel: return "DataObject";
    case ElementKind::ObservedEvent: return "Assessment";
    case ElementKind::UserValue:
    case ElementKind::QualityValue:
    case ElementKind::BusinessValue: return "Value";
    case ElementKind::CostItem: return "Value";
    case ElementKind::RiskItem: return "Assessment";
    case ElementKind::Principle: return "Principle";
  }
  return "";
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c; break;
    }
  }
  return out;
}

namespace detail {

// Property keys in output order. The element attribute `role` (actors) is
// exported as `actor_role` so it cannot clash with the risk/cost marker.
inline constexpr std::array<std::string_view, 11> kPropertyKeys{
    "role",         "category",          "rule",
    "severity",     "runs_on",           "actor_role",
    "yields_user_value", "yields_quality_value", "yields_business_value",
    "implies_cost", "hinders",
};

struct Property {
  std::string_view key;
  std::string value;
};

inline std::vector<Property> properties_of(const Element& e) {
  std::vector<Property> props;
  if (e.kind == ElementKind::RiskItem) props.push_back({"role", "risk"});
  if (e.kind == ElementKind::CostItem) props.push_back({"role", "cost"});
  for (auto key : kPropertyKeys) {
    std::string_view attr_key = key == "actor_role" ? "role" : key;
    if (key == "role") continue;
    for (const auto* a : e.attrs_with(attr_key)) {
      std::string value = a->value;
      if (a->severity) value += " (" + std::string(to_string(*a->severity)) + ")";
      if (!a->text.empty()) value += ": " + a->text;
      props.push_back({key, std::move(value)});
    }
  }
  return props;
}

class IdMap {
 public:
  explicit IdMap(bool deterministic) : deterministic_(deterministic), rng_(std::random_device{}()) {}

  const std::string& operator()(const std::string& slug) {
    auto it = ids_.find(slug);
    if (it != ids_.end()) return it->second;
    std::string id = deterministic_ ? "id-" + slug : random_id();
    return ids_.emplace(slug, std::move(id)).first->second;
  }

 private:
  std::string random_id() {
    static constexpr char hex[] = "0123456789abcdef";
    std::uniform_int_distribution<int> dist(0, 15);
    std::string id = "id-";
    for (int i = 0; i < 32; ++i) id += hex[dist(rng_)];
    return id;
  }

  bool deterministic_;
  std::mt19937_64 rng_;
  std::unordered_map<std::string, std::string> ids_;
};

}  // namespace detail

// ArchiMate 3.x Open Exchange document. Identifiers are `id-<slug>` for
// elements, `id-rel-<n>` for relationships and `id-model-<system slug>` for
// the model; property definitions are `propid-<key>`. UTF-8, LF, two-space
// indent, attributes in a fixed order. Throws ModelError E300 on invalid models.
inline std::string to_open_exchange(const AlignmentModel& model, const ExportOptions& opts = {}) {
  require_exportable(model);
  detail::IdMap ids(opts.deterministic_ids);
  std::string out;
  auto line = [&out](int depth, const std::string& text) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += text;
    out += '\n';
  };
  auto lang_text = [](std::string_view tag, std::string_view text) {
    return "<" + std::string(tag) + " xml:lang=\"en\">" + xml_escape(text) + "</" + std::string(tag) +
           ">";
  };

  line(0, R"(<?xml version="1.0" encoding="UTF-8"?>)");
  line(0,
       R"(<model xmlns="http://www.opengroup.org/xsd/archimate/3.0/" )"
       R"(xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" identifier=")" +
           xml_escape(ids("model-" + slugify(model.system_name()))) + "\">");
  line(1, lang_text("name", model.system_name()));

  std::vector<std::string_view> used_keys;
  auto note_key = [&used_keys](std::string_view key) {
    if (std::find(used_keys.begin(), used_keys.end(), key) == used_keys.end()) used_keys.push_back(key);
  };

  bool any_element = false;
  for (const auto& e : model.elements()) {
    if (!exported(e, opts)) continue;
    if (!any_element) line(1, "<elements>");
    any_element = true;
    line(2, "<element identifier=\"" + xml_escape(ids(e.id)) + "\" xsi:type=\"" +
                std::string(archimate_type(e.kind)) + "\">");
    line(3, lang_text("name", e.name));
    if (!e.description.empty()) line(3, lang_text("documentation", e.description));
    auto props = detail::properties_of(e);
    if (!props.empty()) {
      line(3, "<properties>");
      for (const auto& p : props) {
        note_key(p.key);
        line(4, "<property propertyDefinitionRef=\"propid-" + std::string(p.key) + "\">");
        line(5, lang_text("value", p.value));
        line(4, "</property>");
      }
      line(3, "</properties>");
    }
    line(2, "</element>");
  }
  if (any_element) line(1, "</elements>");

  bool any_relation = false;
  for (const auto& r : model.relations()) {
    if (!exported(model, r, opts)) continue;
    if (!any_relation) line(1, "<relationships>");
    any_relation = true;
    std::string tag = "<relationship identifier=\"" + xml_escape(ids(r.id)) + "\" source=\"" +
                      xml_escape(ids(r.source)) + "\" target=\"" + xml_escape(ids(r.target)) +
                      "\" xsi:type=\"" + std::string(to_string(r.kind)) + "\"";
    if (r.kind == RelationKind::Influence &&
        model.find(r.target)->kind == ElementKind::Principle) {
      tag += " modifier=\"-\"";
    }
    line(2, tag + " />");
  }
  if (any_relation) line(1, "</relationships>");

  if (!used_keys.empty()) {
    line(1, "<propertyDefinitions>");
    for (auto key : detail::kPropertyKeys) {
      if (std::find(used_keys.begin(), used_keys.end(), key) == used_keys.end()) continue;
      line(2, "<propertyDefinition identifier=\"propid-" + std::string(key) + "\" type=\"string\">");
      line(3, lang_text("name", key));
      line(2, "</propertyDefinition>");
    }
    line(1, "</propertyDefinitions>");
  }
  line(0, "</model>");
  return out;
}

}  // namespace dsalign::exporter
