#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dsalign/diagnostic.hpp"
#include "dsalign/model.hpp"
#include "dsalign/taxonomy.hpp"
#include "dsalign/validate.hpp"

namespace dsalign {

// Derivation rules, in output order.
enum class Rule { R1_cost, R2_risk, R3_business, R4_user, R5_quality };

inline constexpr std::array<Rule, 5> kAllRules{Rule::R1_cost, Rule::R2_risk, Rule::R3_business,
                                               Rule::R4_user, Rule::R5_quality};

constexpr std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::R1_cost: return "R1_cost";
    case Rule::R2_risk: return "R2_risk";
    case Rule::R3_business: return "R3_business";
    case Rule::R4_user: return "R4_user";
    case Rule::R5_quality: return "R5_quality";
  }
  return "";
}

inline std::optional<Rule> parse_rule(std::string_view s) {
  for (Rule r : kAllRules) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

constexpr LeafGroup group_of(Rule r) {
  switch (r) {
    case Rule::R1_cost: return LeafGroup::Cost;
    case Rule::R2_risk: return LeafGroup::Risk;
    case Rule::R3_business: return LeafGroup::BusinessValue;
    case Rule::R4_user: return LeafGroup::UserValue;
    case Rule::R5_quality: return LeafGroup::QualityValue;
  }
  return LeafGroup::Cost;
}

// Element kind an item of this rule becomes once attached.
constexpr ElementKind item_kind(Rule r) {
  switch (r) {
    case Rule::R1_cost: return ElementKind::CostItem;
    case Rule::R2_risk: return ElementKind::RiskItem;
    case Rule::R3_business: return ElementKind::BusinessValue;
    case Rule::R4_user: return ElementKind::UserValue;
    case Rule::R5_quality: return ElementKind::QualityValue;
  }
  return ElementKind::CostItem;
}

struct EvaluationItem {
  std::string id;  // assigned by derive_all
  Leaf category = Leaf::HumanResources;
  std::string description;
  std::vector<std::string> sources;
  std::optional<RiskLevel> severity;  // R2 only
  Rule rule = Rule::R1_cost;
  // Operator activities whose business value this (user or quality) value feeds.
  std::vector<std::string> influences;

  bool operator==(const EvaluationItem&) const = default;
};

struct EvaluationItemSet {
  std::string system_name;
  std::vector<EvaluationItem> items;
  std::vector<Diagnostic> warnings;

  bool operator==(const EvaluationItemSet&) const = default;
};

namespace detail {

inline void require_valid(const AlignmentModel& model) {
  for (const auto& d : validate(model)) {
    if (d.is_error()) {
      throw ModelError(make_error("E200",
                                  "derivation refused: model has validation errors (first: " +
                                      d.code + " " + d.message + ")",
                                  d.subject));
    }
  }
}

inline std::string templated(const std::string& name, const std::string& text) {
  return text.empty() ? name : name + ": " + text;
}

inline EvaluationItem item(Rule rule, Leaf leaf, std::string description, std::string source) {
  EvaluationItem it;
  it.rule = rule;
  it.category = leaf;
  it.description = std::move(description);
  it.sources.push_back(std::move(source));
  return it;
}

// Per (activity, `key` entry) items for the value rules R3-R5.
inline std::vector<EvaluationItem> value_items(const AlignmentModel& model, ElementKind kind,
                                               std::string_view key, Rule rule) {
  std::vector<EvaluationItem> out;
  for (const auto& e : model.elements()) {
    if (e.kind != kind) continue;
    for (const auto* a : e.attrs_with(key)) {
      auto leaf = parse_leaf_in(group_of(rule), a->value);
      if (!leaf) continue;
      out.push_back(item(rule, *leaf, templated(e.name, a->text), e.id));
    }
  }
  return out;
}

// Targets of `influences:` declared on a user activity.
inline std::vector<std::string> influenced_activities(const AlignmentModel& model,
                                                      const std::string& activity) {
  std::vector<std::string> out;
  for (const auto& r : model.relations()) {
    if (r.kind != RelationKind::Influence || r.source != activity) continue;
    const Element* t = model.find(r.target);
    if (t && t->kind == ElementKind::OperatorActivity) out.push_back(r.target);
  }
  return out;
}

inline void attach_influences(const AlignmentModel& model, std::vector<EvaluationItem>& items,
                              std::vector<Diagnostic>* warnings) {
  for (auto& it : items) it.influences = influenced_activities(model, it.sources.front());
  if (!warnings) return;
  std::set<std::string> reported;
  for (const auto& e : model.elements()) {
    if (e.kind != ElementKind::UserActivity) continue;
    for (const auto& target : influenced_activities(model, e.id)) {
      if (model.find(target)->attr("yields_business_value")) continue;
      if (!reported.insert(e.id + "->" + target).second) continue;
      warnings->push_back(make_warning("W110",
                                       "'" + e.id + "' influences '" + target +
                                           "', which yields no business value",
                                       e.id));
    }
  }
}

}  // namespace detail

// R1. Per component: development/testing and operation/maintenance staffing,
// plus an IT item when it runs on a server or an external API. Per event with
// `implies_cost`: one item in the stated leaf. Ordered by source position.
inline std::vector<EvaluationItem> derive_costs(const AlignmentModel& model) {
  detail::require_valid(model);
  std::vector<EvaluationItem> out;
  for (const auto& e : model.elements()) {
    if (e.kind == ElementKind::SystemComponent) {
      out.push_back(detail::item(Rule::R1_cost, Leaf::HumanResources, "develop and test " + e.name, e.id));
      out.push_back(
          detail::item(Rule::R1_cost, Leaf::HumanResources, "operate and maintain " + e.name, e.id));
      if (const Attribute* runs_on = e.attr("runs_on")) {
        if (runs_on->value == "server") {
          out.push_back(
              detail::item(Rule::R1_cost, Leaf::ItResources, "server usage fees for " + e.name, e.id));
        } else if (runs_on->value == "external_api") {
          out.push_back(detail::item(Rule::R1_cost, Leaf::ItResources,
                                     "external API usage fees for " + e.name, e.id));
        }
      }
    } else if (e.kind == ElementKind::ObservedEvent) {
      for (const auto* a : e.attrs_with("implies_cost")) {
        auto leaf = parse_cost_leaf(a->value);
        if (!leaf) continue;
        out.push_back(detail::item(Rule::R1_cost, *leaf, detail::templated(e.name, a->text), e.id));
      }
    }
  }
  return out;
}

// R2. One item per (event, hinders entry), carrying the entry's severity.
inline std::vector<EvaluationItem> derive_risks(const AlignmentModel& model) {
  detail::require_valid(model);
  std::vector<EvaluationItem> out;
  for (const auto& e : model.elements()) {
    if (e.kind != ElementKind::ObservedEvent) continue;
    for (const auto* a : e.attrs_with("hinders")) {
      auto leaf = parse_leaf_in(LeafGroup::Risk, a->value);
      if (!leaf) continue;
      auto it = detail::item(Rule::R2_risk, *leaf, detail::templated(e.name, a->text), e.id);
      it.severity = a->severity.value_or(RiskLevel::Medium);
      out.push_back(std::move(it));
    }
  }
  return out;
}

// R3. One item per (operator activity, yields_business_value entry).
inline std::vector<EvaluationItem> derive_business_values(const AlignmentModel& model) {
  detail::require_valid(model);
  return detail::value_items(model, ElementKind::OperatorActivity, "yields_business_value",
                             Rule::R3_business);
}

// R4. One item per (user activity, yields_user_value entry). `influences:`
// targets are carried on the item; W110 when a target yields no business value.
inline std::vector<EvaluationItem> derive_user_values(const AlignmentModel& model,
                                                      std::vector<Diagnostic>* warnings = nullptr) {
  detail::require_valid(model);
  auto out = detail::value_items(model, ElementKind::UserActivity, "yields_user_value", Rule::R4_user);
  detail::attach_influences(model, out, warnings);
  return out;
}

// R5. One item per (user activity, yields_quality_value entry).
inline std::vector<EvaluationItem> derive_quality_values(const AlignmentModel& model) {
  detail::require_valid(model);
  auto out = detail::value_items(model, ElementKind::UserActivity, "yields_quality_value",
                                 Rule::R5_quality);
  detail::attach_influences(model, out, nullptr);
  return out;
}

inline std::string rule_slug(Rule r) {
  std::string s(to_string(r));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// R1..R5 concatenated, ids `item_<rule>_<n>` numbered in output order.
// Throws ModelError E200 when the model has validation errors.
inline EvaluationItemSet derive_all(const AlignmentModel& model) {
  detail::require_valid(model);
  EvaluationItemSet set;
  set.system_name = model.system_name();
  set.warnings = validate(model);

  std::vector<Diagnostic> user_warnings;
  std::vector<std::vector<EvaluationItem>> parts;
  parts.push_back(derive_costs(model));
  parts.push_back(derive_risks(model));
  parts.push_back(derive_business_values(model));
  parts.push_back(derive_user_values(model, &user_warnings));
  parts.push_back(derive_quality_values(model));
  for (auto& w : user_warnings) set.warnings.push_back(std::move(w));

  std::size_t n = 0;
  for (auto& part : parts) {
    for (auto& it : part) {
      it.id = "item_" + rule_slug(it.rule) + "_" + std::to_string(++n);
      set.items.push_back(std::move(it));
    }
  }
  return set;
}

struct ItemCounts {
  std::size_t cost = 0, risk = 0, business = 0, user = 0, quality = 0;
  std::size_t total() const { return cost + risk + business + user + quality; }
};

inline ItemCounts count_items(const EvaluationItemSet& set) {
  ItemCounts c;
  for (const auto& it : set.items) {
    switch (it.rule) {
      case Rule::R1_cost: ++c.cost; break;
      case Rule::R2_risk: ++c.risk; break;
      case Rule::R3_business: ++c.business; break;
      case Rule::R4_user: ++c.user; break;
      case Rule::R5_quality: ++c.quality; break;
    }
  }
  return c;
}

// "15 items (9 cost, 2 risk, 2 business, 1 user, 1 quality)"
inline std::string summary(const EvaluationItemSet& set) {
  auto c = count_items(set);
  return std::to_string(c.total()) + (c.total() == 1 ? " item (" : " items (") +
         std::to_string(c.cost) + " cost, " + std::to_string(c.risk) + " risk, " +
         std::to_string(c.business) + " business, " + std::to_string(c.user) + " user, " +
         std::to_string(c.quality) + " quality)";
}

inline std::string principle_id(Leaf leaf) { return "principle_" + std::string(leaf_name(leaf)); }

inline std::string principle_name(Leaf leaf) {
  switch (leaf) {
    case Leaf::Transparency: return "Transparency";
    case Leaf::JusticeFairness: return "Justice and fairness";
    case Leaf::NonMaleficence: return "Non-maleficence";
    case Leaf::Responsibility: return "Responsibility";
    case Leaf::Privacy: return "Privacy";
    case Leaf::Beneficence: return "Beneficence";
    case Leaf::FreedomAutonomy: return "Freedom and autonomy";
    default: return std::string(leaf_name(leaf));
  }
}

// Materializes the items into a new frozen model: one element per item, a
// Principle element per referenced risk leaf, and edges to every source.
//   cost from component     CostItem -- SystemComponent   (Association)
//   cost from event         ObservedEvent -> CostItem     (Influence)
//   risk                    RiskItem -- ObservedEvent, RiskItem -- Principle,
//                           ObservedEvent -> Principle    (Influence)
//   business/user/quality   value -- activity             (Association)
//   user/quality influences value -> BusinessValue        (Influence)
// Throws E201 when the itemset names another system, refers to unknown
// sources, or was already attached.
inline AlignmentModel attach(const AlignmentModel& model, const EvaluationItemSet& set) {
  auto mismatch = [](std::string message, std::optional<std::string> subject = std::nullopt) {
    throw ModelError(make_error("E201", std::move(message), std::move(subject)));
  };
  if (set.system_name != model.system_name()) {
    mismatch("itemset was derived for '" + set.system_name + "', not '" + model.system_name() + "'");
  }
  for (const auto& it : set.items) {
    if (model.find(it.id)) mismatch("item '" + it.id + "' is already materialized in the model", it.id);
    if (it.sources.empty()) mismatch("item '" + it.id + "' has no sources", it.id);
    for (const auto& s : it.sources) {
      if (!model.find(s)) mismatch("item '" + it.id + "' refers to unknown source '" + s + "'", it.id);
    }
  }

  AlignmentModel out = model.thaw();
  std::vector<Leaf> principles;
  for (const auto& it : set.items) {
    std::vector<Attribute> attrs{{"category", std::string(leaf_name(it.category)), {}, std::nullopt},
                                 {"rule", std::string(to_string(it.rule)), {}, std::nullopt}};
    if (it.rule == Rule::R2_risk) {
      attrs.push_back({"severity", std::string(to_string(it.severity.value_or(RiskLevel::Medium))),
                       {}, std::nullopt});
      if (std::find(principles.begin(), principles.end(), it.category) == principles.end()) {
        principles.push_back(it.category);
      }
    }
    try {
      out.add_element(item_kind(it.rule), it.id, it.description, std::move(attrs));
    } catch (const ModelError& e) {
      mismatch("cannot attach item '" + it.id + "': " + e.diagnostic().message, it.id);
    }
  }
  for (Leaf leaf : principles) {
    if (out.find(principle_id(leaf))) continue;
    out.add_element(ElementKind::Principle, principle_id(leaf), principle_name(leaf),
                    {{"category", std::string(leaf_name(leaf)), {}, std::nullopt}});
  }

  std::set<std::pair<std::string, std::string>> event_principle;
  for (const auto& it : set.items) {
    for (const auto& source : it.sources) {
      ElementKind source_kind = model.find(source)->kind;
      try {
        if (it.rule == Rule::R1_cost && source_kind == ElementKind::ObservedEvent) {
          out.add_relation(RelationKind::Influence, source, it.id);
        } else if (it.rule == Rule::R2_risk) {
          out.add_relation(RelationKind::Association, it.id, source);
          out.add_relation(RelationKind::Association, it.id, principle_id(it.category));
          if (event_principle.emplace(source, principle_id(it.category)).second) {
            out.add_relation(RelationKind::Influence, source, principle_id(it.category));
          }
        } else {
          out.add_relation(RelationKind::Association, it.id, source);
        }
      } catch (const ModelError& e) {
        mismatch("cannot anchor item '" + it.id + "': " + e.diagnostic().message, it.id);
      }
    }
  }
  for (const auto& it : set.items) {
    if (it.rule != Rule::R4_user && it.rule != Rule::R5_quality) continue;
    for (const auto& target : it.influences) {
      for (const auto& business : set.items) {
        if (business.rule != Rule::R3_business) continue;
        if (std::find(business.sources.begin(), business.sources.end(), target) ==
            business.sources.end()) {
          continue;
        }
        out.add_relation(RelationKind::Influence, it.id, business.id);
      }
    }
  }
  out.freeze();
  return out;
}

}  // namespace dsalign
