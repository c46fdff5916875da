#pragma once

#include <string>

#include "json.hpp"

#include "dsalign/derivation.hpp"
#include "dsalign/diagnostic.hpp"

namespace dsalign {

// Itemset document (JSON, keys sorted, two-space indent, LF, trailing newline):
//
//   {
//     "format": "dsalign-itemset/1",
//     "items": [
//       { "category": "cost/human_resources", "description": "...",
//         "id": "item_r1_cost_1", "influences": [...],   // only when non-empty
//         "rule": "R1_cost", "severity": "low",           // severity: risks only
//         "sources": ["web_server"] }, ...
//     ],
//     "system": "FAQ Chatbot",
//     "warnings": [ { "code": "W101", "message": "...", "severity": "warning",
//                     "subject": "..." }, ... ]
//   }
inline constexpr const char* kItemsetFormat = "dsalign-itemset/1";

inline nlohmann::json to_json(const EvaluationItemSet& set) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : set.items) {
    nlohmann::json j;
    j["id"] = it.id;
    j["rule"] = std::string(to_string(it.rule));
    j["category"] = std::string(category_path(it.category));
    j["description"] = it.description;
    j["sources"] = it.sources;
    if (it.severity) j["severity"] = std::string(to_string(*it.severity));
    if (!it.influences.empty()) j["influences"] = it.influences;
    items.push_back(std::move(j));
  }
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto& w : set.warnings) {
    nlohmann::json j;
    j["code"] = w.code;
    j["severity"] = to_string(w.severity);
    j["message"] = w.message;
    if (w.subject) j["subject"] = *w.subject;
    warnings.push_back(std::move(j));
  }
  return nlohmann::json{{"format", kItemsetFormat},
                        {"system", set.system_name},
                        {"items", std::move(items)},
                        {"warnings", std::move(warnings)}};
}

inline std::string serialize(const EvaluationItemSet& set) {
  return to_json(set).dump(2, ' ', false) + "\n";
}

// Throws ModelError E201 on a document that is not an itemset.
inline EvaluationItemSet itemset_from_json(const nlohmann::json& doc) {
  auto bad = [](const std::string& why) -> EvaluationItemSet {
    throw ModelError(make_error("E201", "not an itemset document: " + why));
  };
  if (!doc.is_object() || doc.value("format", "") != kItemsetFormat) return bad("format tag");
  EvaluationItemSet set;
  try {
    set.system_name = doc.at("system").get<std::string>();
    for (const auto& j : doc.at("items")) {
      EvaluationItem it;
      it.id = j.at("id").get<std::string>();
      auto rule = parse_rule(j.at("rule").get<std::string>());
      auto leaf = parse_category_path(j.at("category").get<std::string>());
      if (!rule || !leaf) return bad("item '" + it.id + "' has an unknown rule or category");
      it.rule = *rule;
      it.category = *leaf;
      it.description = j.at("description").get<std::string>();
      it.sources = j.at("sources").get<std::vector<std::string>>();
      if (j.contains("severity")) {
        auto level = parse_risk_level(j.at("severity").get<std::string>());
        if (!level) return bad("item '" + it.id + "' has an unknown severity");
        it.severity = *level;
      }
      if (j.contains("influences")) it.influences = j.at("influences").get<std::vector<std::string>>();
      set.items.push_back(std::move(it));
    }
    for (const auto& j : doc.at("warnings")) {
      Diagnostic d;
      d.code = j.at("code").get<std::string>();
      d.severity = j.at("severity").get<std::string>() == "error" ? Severity::Error : Severity::Warning;
      d.message = j.at("message").get<std::string>();
      if (j.contains("subject")) d.subject = j.at("subject").get<std::string>();
      set.warnings.push_back(std::move(d));
    }
  } catch (const nlohmann::json::exception& e) {
    return bad(e.what());
  }
  return set;
}

inline EvaluationItemSet deserialize(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(make_error("E201", std::string("not an itemset document: ") + e.what()));
  }
  return itemset_from_json(doc);
}

}  // namespace dsalign
