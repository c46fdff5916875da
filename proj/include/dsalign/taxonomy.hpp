#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsalign {

// Leaves of the evaluation-item taxonomy, in canonical row order:
// value branch (user, quality, business), risk branch, cost branch.
enum class Leaf {
  Functional,
  Emotional,
  SelfExpressive,
  Social,
  MustBe,
  Attractive,
  RevenueIncrease,
  CostReduction,
  NewRevenue,
  Transparency,
  JusticeFairness,
  NonMaleficence,
  Responsibility,
  Privacy,
  Beneficence,
  FreedomAutonomy,
  HumanResources,
  InformationResources,
  ItResources,
};

enum class Branch { Value, Risk, Cost };

// Second-level grouping. Each group is fed by exactly one derivation rule.
enum class LeafGroup { UserValue, QualityValue, BusinessValue, Risk, Cost };

namespace detail {

struct LeafInfo {
  Leaf leaf;
  LeafGroup group;
  std::string_view name;
  std::string_view path;
};

inline constexpr std::array<LeafInfo, 19> kLeaves{{
    {Leaf::Functional, LeafGroup::UserValue, "functional", "value/user/functional"},
    {Leaf::Emotional, LeafGroup::UserValue, "emotional", "value/user/emotional"},
    {Leaf::SelfExpressive, LeafGroup::UserValue, "self_expressive", "value/user/self_expressive"},
    {Leaf::Social, LeafGroup::UserValue, "social", "value/user/social"},
    {Leaf::MustBe, LeafGroup::QualityValue, "must_be", "value/quality/must_be"},
    {Leaf::Attractive, LeafGroup::QualityValue, "attractive", "value/quality/attractive"},
    {Leaf::RevenueIncrease, LeafGroup::BusinessValue, "revenue_increase",
     "value/business/revenue_increase"},
    {Leaf::CostReduction, LeafGroup::BusinessValue, "cost_reduction",
     "value/business/cost_reduction"},
    {Leaf::NewRevenue, LeafGroup::BusinessValue, "new_revenue", "value/business/new_revenue"},
    {Leaf::Transparency, LeafGroup::Risk, "transparency", "risk/transparency"},
    {Leaf::JusticeFairness, LeafGroup::Risk, "justice_fairness", "risk/justice_fairness"},
    {Leaf::NonMaleficence, LeafGroup::Risk, "non_maleficence", "risk/non_maleficence"},
    {Leaf::Responsibility, LeafGroup::Risk, "responsibility", "risk/responsibility"},
    {Leaf::Privacy, LeafGroup::Risk, "privacy", "risk/privacy"},
    {Leaf::Beneficence, LeafGroup::Risk, "beneficence", "risk/beneficence"},
    {Leaf::FreedomAutonomy, LeafGroup::Risk, "freedom_autonomy", "risk/freedom_autonomy"},
    {Leaf::HumanResources, LeafGroup::Cost, "human_resources", "cost/human_resources"},
    {Leaf::InformationResources, LeafGroup::Cost, "information_resources",
     "cost/information_resources"},
    {Leaf::ItResources, LeafGroup::Cost, "it_resources", "cost/it_resources"},
}};

constexpr std::size_t count_group(LeafGroup g) {
  std::size_t n = 0;
  for (const auto& info : kLeaves) {
    if (info.group == g) ++n;
  }
  return n;
}

constexpr bool leaves_in_enum_order() {
  for (std::size_t i = 0; i < kLeaves.size(); ++i) {
    if (static_cast<std::size_t>(kLeaves[i].leaf) != i) return false;
  }
  return true;
}

}  // namespace detail

static_assert(detail::leaves_in_enum_order());
static_assert(detail::count_group(LeafGroup::UserValue) +
                  detail::count_group(LeafGroup::QualityValue) +
                  detail::count_group(LeafGroup::BusinessValue) ==
              9);
static_assert(detail::count_group(LeafGroup::Risk) == 7);
static_assert(detail::count_group(LeafGroup::Cost) == 3);

inline constexpr std::size_t kLeafCount = detail::kLeaves.size();

inline constexpr std::array<Leaf, kLeafCount> all_leaves() {
  std::array<Leaf, kLeafCount> out{};
  for (std::size_t i = 0; i < kLeafCount; ++i) out[i] = detail::kLeaves[i].leaf;
  return out;
}

constexpr std::string_view leaf_name(Leaf l) {
  return detail::kLeaves[static_cast<std::size_t>(l)].name;
}

constexpr std::string_view category_path(Leaf l) {
  return detail::kLeaves[static_cast<std::size_t>(l)].path;
}

constexpr LeafGroup group_of(Leaf l) {
  return detail::kLeaves[static_cast<std::size_t>(l)].group;
}

constexpr Branch branch_of(Leaf l) {
  switch (group_of(l)) {
    case LeafGroup::Risk: return Branch::Risk;
    case LeafGroup::Cost: return Branch::Cost;
    default: return Branch::Value;
  }
}

constexpr std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Value: return "value";
    case Branch::Risk: return "risk";
    case Branch::Cost: return "cost";
  }
  return "";
}

inline std::optional<Leaf> parse_leaf(std::string_view name) {
  for (const auto& info : detail::kLeaves) {
    if (info.name == name) return info.leaf;
  }
  return std::nullopt;
}

inline std::optional<Leaf> parse_category_path(std::string_view path) {
  for (const auto& info : detail::kLeaves) {
    if (info.path == path) return info.leaf;
  }
  return std::nullopt;
}

// Cost leaves have short spellings in .dsa sources (`implies_cost: human`).
constexpr std::string_view cost_short_name(Leaf l) {
  switch (l) {
    case Leaf::HumanResources: return "human";
    case Leaf::InformationResources: return "information";
    case Leaf::ItResources: return "it";
    default: return leaf_name(l);
  }
}

inline std::optional<Leaf> parse_cost_leaf(std::string_view name) {
  if (name == "human" || name == "human_resources") return Leaf::HumanResources;
  if (name == "information" || name == "information_resources") return Leaf::InformationResources;
  if (name == "it" || name == "it_resources") return Leaf::ItResources;
  return std::nullopt;
}

inline std::optional<Leaf> parse_leaf_in(LeafGroup g, std::string_view name) {
  if (g == LeafGroup::Cost) return parse_cost_leaf(name);
  auto l = parse_leaf(name);
  if (l && group_of(*l) == g) return l;
  return std::nullopt;
}

// Spelling used in .dsa sources.
constexpr std::string_view source_spelling(Leaf l) {
  return group_of(l) == LeafGroup::Cost ? cost_short_name(l) : leaf_name(l);
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Closest leaf spelling of group `g` within edit distance 2; ties go to the
// earlier leaf in taxonomy order.
inline std::optional<std::string> suggest_leaf(LeafGroup g, std::string_view name) {
  std::optional<std::string> best;
  std::size_t best_d = 3;
  for (const auto& info : detail::kLeaves) {
    if (info.group != g) continue;
    auto spelling = source_spelling(info.leaf);
    auto d = edit_distance(name, spelling);
    if (d < best_d) {
      best_d = d;
      best = std::string(spelling);
    }
  }
  return best;
}

}  // namespace dsalign
