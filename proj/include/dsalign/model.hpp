#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dsalign/diagnostic.hpp"
#include "dsalign/taxonomy.hpp"

namespace dsalign {

// The first nine kinds describe the dialogue system and its business context;
// the last six hold derived values, risks, costs and the principles behind risks.
enum class ElementKind {
  User,
  Operator,
  UserActivity,
  OperatorActivity,
  DialogueService,
  SystemComponent,
  ComponentFunction,
  DataModel,
  ObservedEvent,
  UserValue,
  QualityValue,
  BusinessValue,
  CostItem,
  RiskItem,
  Principle,
};

inline constexpr std::array<ElementKind, 15> kAllElementKinds{
    ElementKind::User,           ElementKind::Operator,          ElementKind::UserActivity,
    ElementKind::OperatorActivity, ElementKind::DialogueService, ElementKind::SystemComponent,
    ElementKind::ComponentFunction, ElementKind::DataModel,      ElementKind::ObservedEvent,
    ElementKind::UserValue,      ElementKind::QualityValue,      ElementKind::BusinessValue,
    ElementKind::CostItem,       ElementKind::RiskItem,          ElementKind::Principle,
};

enum class RelationKind { Serving, Realization, Assignment, Association, Influence, Aggregation, Access };

inline constexpr std::array<RelationKind, 7> kAllRelationKinds{
    RelationKind::Serving,   RelationKind::Realization, RelationKind::Assignment,
    RelationKind::Association, RelationKind::Influence, RelationKind::Aggregation,
    RelationKind::Access,
};

constexpr std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::User: return "User";
    case ElementKind::Operator: return "Operator";
    case ElementKind::UserActivity: return "UserActivity";
    case ElementKind::OperatorActivity: return "OperatorActivity";
    case ElementKind::DialogueService: return "DialogueService";
    case ElementKind::SystemComponent: return "SystemComponent";
    case ElementKind::ComponentFunction: return "ComponentFunction";
    case ElementKind::DataModel: return "DataModel";
    case ElementKind::ObservedEvent: return "ObservedEvent";
    case ElementKind::UserValue: return "UserValue";
    case ElementKind::QualityValue: return "QualityValue";
    case ElementKind::BusinessValue: return "BusinessValue";
    case ElementKind::CostItem: return "CostItem";
    case ElementKind::RiskItem: return "RiskItem";
    case ElementKind::Principle: return "Principle";
  }
  return "";
}

constexpr std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::Serving: return "Serving";
    case RelationKind::Realization: return "Realization";
    case RelationKind::Assignment: return "Assignment";
    case RelationKind::Association: return "Association";
    case RelationKind::Influence: return "Influence";
    case RelationKind::Aggregation: return "Aggregation";
    case RelationKind::Access: return "Access";
  }
  return "";
}

constexpr bool is_directed(RelationKind k) { return k != RelationKind::Association; }

constexpr bool is_motivation_kind(ElementKind k) {
  return static_cast<int>(k) >= static_cast<int>(ElementKind::UserValue);
}

enum class RiskLevel { Low, Medium, High };

constexpr std::string_view to_string(RiskLevel l) {
  switch (l) {
    case RiskLevel::Low: return "low";
    case RiskLevel::Medium: return "medium";
    case RiskLevel::High: return "high";
  }
  return "";
}

inline std::optional<RiskLevel> parse_risk_level(std::string_view s) {
  if (s == "low") return RiskLevel::Low;
  if (s == "medium") return RiskLevel::Medium;
  if (s == "high") return RiskLevel::High;
  return std::nullopt;
}

inline constexpr std::array<std::string_view, 4> kRunsOnValues{"server", "device", "external_api",
                                                               "browser"};

inline bool is_runs_on_value(std::string_view s) {
  return std::find(kRunsOnValues.begin(), kRunsOnValues.end(), s) != kRunsOnValues.end();
}

// One attribute entry. Multi-valued keys (hinders, yields_*) repeat the entry.
//   value    leaf name, enumeration value, or free text (role)
//   text     quoted description, may be empty
//   severity only meaningful for `hinders`
struct Attribute {
  std::string key;
  std::string value;
  std::string text;
  std::optional<RiskLevel> severity;

  bool operator==(const Attribute&) const = default;
};

// Per-kind attribute allowlist, in canonical output order.
inline std::span<const std::string_view> allowed_attrs(ElementKind k) {
  static constexpr std::array<std::string_view, 1> actor{"role"};
  static constexpr std::array<std::string_view, 2> user_activity{"yields_user_value",
                                                                 "yields_quality_value"};
  static constexpr std::array<std::string_view, 1> operator_activity{"yields_business_value"};
  static constexpr std::array<std::string_view, 1> component{"runs_on"};
  static constexpr std::array<std::string_view, 2> event{"implies_cost", "hinders"};
  static constexpr std::array<std::string_view, 2> item{"category", "rule"};
  static constexpr std::array<std::string_view, 3> risk_item{"category", "rule", "severity"};
  static constexpr std::array<std::string_view, 1> principle{"category"};
  switch (k) {
    case ElementKind::User:
    case ElementKind::Operator: return actor;
    case ElementKind::UserActivity: return user_activity;
    case ElementKind::OperatorActivity: return operator_activity;
    case ElementKind::SystemComponent: return component;
    case ElementKind::ObservedEvent: return event;
    case ElementKind::UserValue:
    case ElementKind::QualityValue:
    case ElementKind::BusinessValue:
    case ElementKind::CostItem: return item;
    case ElementKind::RiskItem: return risk_item;
    case ElementKind::Principle: return principle;
    default: return {};
  }
}

inline bool is_attr_allowed(ElementKind k, std::string_view key) {
  auto keys = allowed_attrs(k);
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

// Keys that may appear at most once per element.
inline bool is_single_valued_attr(std::string_view key) {
  return key == "runs_on" || key == "category" || key == "rule" || key == "severity";
}

// ---------------------------------------------------------------------------
// Permitted connections

struct PermittedTriple {
  ElementKind source;
  RelationKind kind;
  ElementKind target;
};

// Associations are undirected: a pair listed here matches either orientation.
// Associations between any other pair are accepted as a fallback (W105).
inline constexpr std::array<PermittedTriple, 24> kPermittedConnections{{
    {ElementKind::User, RelationKind::Assignment, ElementKind::UserActivity},
    {ElementKind::Operator, RelationKind::Assignment, ElementKind::OperatorActivity},
    {ElementKind::DialogueService, RelationKind::Serving, ElementKind::UserActivity},
    {ElementKind::DialogueService, RelationKind::Serving, ElementKind::OperatorActivity},
    {ElementKind::SystemComponent, RelationKind::Serving, ElementKind::DialogueService},
    {ElementKind::ComponentFunction, RelationKind::Realization, ElementKind::DialogueService},
    {ElementKind::SystemComponent, RelationKind::Realization, ElementKind::ComponentFunction},
    {ElementKind::SystemComponent, RelationKind::Access, ElementKind::DataModel},
    {ElementKind::ComponentFunction, RelationKind::Access, ElementKind::DataModel},
    {ElementKind::ObservedEvent, RelationKind::Association, ElementKind::SystemComponent},
    {ElementKind::ObservedEvent, RelationKind::Association, ElementKind::ComponentFunction},
    {ElementKind::ObservedEvent, RelationKind::Association, ElementKind::DataModel},
    {ElementKind::UserValue, RelationKind::Influence, ElementKind::BusinessValue},
    {ElementKind::QualityValue, RelationKind::Influence, ElementKind::BusinessValue},
    {ElementKind::ObservedEvent, RelationKind::Influence, ElementKind::Principle},
    {ElementKind::ObservedEvent, RelationKind::Influence, ElementKind::CostItem},
    // `influences:` on a user activity points at the operator activity whose
    // business value it feeds.
    {ElementKind::UserActivity, RelationKind::Influence, ElementKind::OperatorActivity},
    // Derived items anchored to the elements they were derived from.
    {ElementKind::CostItem, RelationKind::Association, ElementKind::SystemComponent},
    {ElementKind::CostItem, RelationKind::Association, ElementKind::ObservedEvent},
    {ElementKind::RiskItem, RelationKind::Association, ElementKind::ObservedEvent},
    {ElementKind::RiskItem, RelationKind::Association, ElementKind::Principle},
    {ElementKind::BusinessValue, RelationKind::Association, ElementKind::OperatorActivity},
    {ElementKind::UserValue, RelationKind::Association, ElementKind::UserActivity},
    {ElementKind::QualityValue, RelationKind::Association, ElementKind::UserActivity},
}};

enum class Connection { Forbidden, Permitted, Fallback };

constexpr Connection connection(ElementKind source, RelationKind kind, ElementKind target) {
  for (const auto& t : kPermittedConnections) {
    if (t.kind != kind) continue;
    if (t.source == source && t.target == target) return Connection::Permitted;
    if (kind == RelationKind::Association && t.source == target && t.target == source) {
      return Connection::Permitted;
    }
  }
  return kind == RelationKind::Association ? Connection::Fallback : Connection::Forbidden;
}

// ---------------------------------------------------------------------------
// Graph

inline bool is_valid_id(std::string_view id) {
  if (id.empty() || id[0] < 'a' || id[0] > 'z') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

struct Element {
  std::string id;
  ElementKind kind = ElementKind::User;
  std::string name;
  std::string description;
  std::vector<Attribute> attrs;

  const Attribute* attr(std::string_view key) const {
    for (const auto& a : attrs) {
      if (a.key == key) return &a;
    }
    return nullptr;
  }

  std::vector<const Attribute*> attrs_with(std::string_view key) const {
    std::vector<const Attribute*> out;
    for (const auto& a : attrs) {
      if (a.key == key) out.push_back(&a);
    }
    return out;
  }

  bool operator==(const Element&) const = default;
};

struct Relation {
  std::string id;
  RelationKind kind = RelationKind::Association;
  std::string source;
  std::string target;

  bool touches(std::string_view element_id) const {
    return source == element_id || target == element_id;
  }
  bool operator==(const Relation&) const = default;
};

// A typed property graph describing one dialogue system. Elements and
// relations keep insertion order, which is also the serialization order.
// Mutable until freeze(); afterwards every add_* throws E007.
class AlignmentModel {
 public:
  explicit AlignmentModel(std::string system_name) : system_name_(std::move(system_name)) {
    if (system_name_.empty()) {
      throw ModelError(make_error("E000", "system name must not be empty"));
    }
  }

  const std::string& system_name() const noexcept { return system_name_; }
  std::span<const Element> elements() const noexcept { return elements_; }
  std::span<const Relation> relations() const noexcept { return relations_; }
  bool frozen() const noexcept { return frozen_; }
  void freeze() noexcept { frozen_ = true; }

  const Element* find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &elements_[it->second];
  }

  std::optional<std::size_t> position(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string add_element(Element e) {
    ensure_mutable();
    if (!is_valid_id(e.id)) {
      throw ModelError(make_error("E005", "identifier '" + e.id + "' must match [a-z][a-z0-9_]*",
                                  e.id));
    }
    if (index_.count(e.id)) {
      throw ModelError(make_error("E001", "duplicate identifier '" + e.id + "'", e.id));
    }
    if (e.kind == ElementKind::User || e.kind == ElementKind::Operator) {
      for (const auto& existing : elements_) {
        if (existing.kind == e.kind) {
          throw ModelError(make_error("E006",
                                      "a model has at most one " + std::string(to_string(e.kind)) +
                                          " element (already declared: '" + existing.id + "')",
                                      e.id));
        }
      }
    }
    for (const auto& a : e.attrs) {
      if (!is_attr_allowed(e.kind, a.key)) {
        throw ModelError(make_error("E002",
                                    "attribute '" + a.key + "' is not allowed on " +
                                        std::string(to_string(e.kind)),
                                    e.id));
      }
    }
    index_.emplace(e.id, elements_.size());
    elements_.push_back(std::move(e));
    return elements_.back().id;
  }

  std::string add_element(ElementKind kind, std::string id, std::string name,
                          std::vector<Attribute> attrs = {}) {
    return add_element(Element{std::move(id), kind, std::move(name), {}, std::move(attrs)});
  }

  std::string add_relation(RelationKind kind, const std::string& source, const std::string& target) {
    ensure_mutable();
    const Element* s = find(source);
    const Element* t = find(target);
    if (!s || !t) {
      const std::string& missing = s ? target : source;
      throw ModelError(make_error("E003", "unknown element '" + missing + "'", missing));
    }
    if (connection(s->kind, kind, t->kind) == Connection::Forbidden) {
      throw ModelError(make_error("E004",
                                  std::string(to_string(kind)) + " from " +
                                      std::string(to_string(s->kind)) + " '" + source + "' to " +
                                      std::string(to_string(t->kind)) + " '" + target +
                                      "' is not a permitted connection",
                                  source));
    }
    for (const auto& r : relations_) {
      bool same = r.kind == kind && r.source == source && r.target == target;
      bool mirrored = !is_directed(kind) && r.kind == kind && r.source == target &&
                      r.target == source;
      if (same || mirrored) {
        throw ModelError(make_error("E001",
                                    "duplicate " + std::string(to_string(kind)) + " relation '" +
                                        source + "' -> '" + target + "'",
                                    source));
      }
    }
    relations_.push_back(
        Relation{"rel-" + std::to_string(relations_.size() + 1), kind, source, target});
    return relations_.back().id;
  }

  // Unfrozen copy for building a successor model.
  AlignmentModel thaw() const {
    AlignmentModel copy = *this;
    copy.frozen_ = false;
    return copy;
  }

  friend bool operator==(const AlignmentModel& a, const AlignmentModel& b) {
    return a.system_name_ == b.system_name_ && a.elements_ == b.elements_ &&
           a.relations_ == b.relations_;
  }

 private:
  void ensure_mutable() const {
    if (frozen_) throw ModelError(make_error("E007", "model is frozen"));
  }

  std::string system_name_;
  std::vector<Element> elements_;
  std::vector<Relation> relations_;
  std::unordered_map<std::string, std::size_t> index_;
  bool frozen_ = false;
};

inline AlignmentModel new_model(std::string system_name) {
  return AlignmentModel(std::move(system_name));
}

inline std::vector<Element> elements_of_kind(const AlignmentModel& model, ElementKind kind) {
  std::vector<Element> out;
  for (const auto& e : model.elements()) {
    if (e.kind == kind) out.push_back(e);
  }
  return out;
}

enum class Direction { In, Out, Any };

// Adjacent elements in model order. Undirected (Association) relations
// match every direction.
inline std::vector<Element> neighbors(const AlignmentModel& model, std::string_view id,
                                      std::optional<RelationKind> kind = std::nullopt,
                                      Direction direction = Direction::Any) {
  if (!model.find(id)) {
    throw ModelError(make_error("E003", "unknown element '" + std::string(id) + "'",
                                std::string(id)));
  }
  std::vector<bool> hit(model.elements().size(), false);
  for (const auto& r : model.relations()) {
    if (kind && r.kind != *kind) continue;
    bool undirected = !is_directed(r.kind);
    if (r.source == id && (undirected || direction != Direction::In)) {
      hit[*model.position(r.target)] = true;
    }
    if (r.target == id && (undirected || direction != Direction::Out)) {
      hit[*model.position(r.source)] = true;
    }
  }
  std::vector<Element> out;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(model.elements()[i]);
  }
  return out;
}

}  // namespace dsalign
