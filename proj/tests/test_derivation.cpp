#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dsalign/derivation.hpp"
#include "dsalign/itemset_io.hpp"
#include "dsalign/validate.hpp"
#include "support/oracles.hpp"

using namespace dsalign;

namespace {

std::multiset<oracle::ItemTuple> tuples(const std::vector<EvaluationItem>& items) {
  std::multiset<oracle::ItemTuple> out;
  for (const auto& it : items) {
    out.insert({std::string(to_string(it.rule)), std::string(category_path(it.category)),
                it.description, it.sources,
                it.severity ? std::string(to_string(*it.severity)) : ""});
  }
  return out;
}

// Rebuilds `m` with elements and relations in a shuffled order.
AlignmentModel shuffled(const AlignmentModel& m, std::mt19937& rng) {
  std::vector<Element> es(m.elements().begin(), m.elements().end());
  std::vector<Relation> rs(m.relations().begin(), m.relations().end());
  std::shuffle(es.begin(), es.end(), rng);
  std::shuffle(rs.begin(), rs.end(), rng);
  AlignmentModel out(m.system_name());
  for (auto& e : es) out.add_element(e);
  for (auto& r : rs) out.add_relation(r.kind, r.source, r.target);
  return out;
}

AlignmentModel small_valid() {
  auto m = new_model("Small");
  m.add_element(ElementKind::SystemComponent, "c", "Engine", {{"runs_on", "external_api", "", {}}});
  m.add_element(ElementKind::ComponentFunction, "f", "Run");
  m.add_relation(RelationKind::Realization, "c", "f");
  return m;
}

}  // namespace

TEST(Derive, CorpusMatchesOracle) {
  for (const auto& name : oracle::kCorpus) {
    auto m = oracle::load(name);
    auto set = derive_all(m);
    EXPECT_EQ(tuples(set.items), oracle::expected_items(m)) << name;
    auto c = count_items(set);
    auto e = oracle::expected_counts(m);
    EXPECT_EQ(c.cost, e.cost) << name;
    EXPECT_EQ(c.risk, e.risk) << name;
    EXPECT_EQ(c.business, e.business) << name;
    EXPECT_EQ(c.user, e.user) << name;
    EXPECT_EQ(c.quality, e.quality) << name;
  }
}

TEST(Derive, FaqPerRule) {
  auto m = oracle::load("faq_chatbot");
  auto costs = derive_costs(m);
  EXPECT_EQ(costs.size(), 9u);
  EXPECT_EQ(std::count_if(costs.begin(), costs.end(),
                          [](const auto& i) { return i.category == Leaf::HumanResources; }),
            6);
  EXPECT_EQ(std::count_if(costs.begin(), costs.end(),
                          [](const auto& i) { return i.category == Leaf::ItResources; }),
            1);
  std::set<std::string> info_sources;
  for (const auto& i : costs) {
    if (i.category == Leaf::InformationResources) info_sources.insert(i.sources.at(0));
  }
  EXPECT_EQ(info_sources, (std::set<std::string>{"needs_faq_set", "needs_scenario"}));

  auto risks = derive_risks(m);
  ASSERT_EQ(risks.size(), 2u);
  EXPECT_EQ(risks[0].category, Leaf::Responsibility);
  EXPECT_EQ(risks[0].severity, RiskLevel::Low);
  EXPECT_EQ(risks[1].category, Leaf::Privacy);
  EXPECT_EQ(risks[1].sources, std::vector<std::string>{"pii"});

  auto business = derive_business_values(m);
  ASSERT_EQ(business.size(), 2u);
  EXPECT_EQ(business[0].category, Leaf::CostReduction);
  EXPECT_EQ(business[1].category, Leaf::NewRevenue);

  std::vector<Diagnostic> warnings;
  auto user = derive_user_values(m, &warnings);
  ASSERT_EQ(user.size(), 1u);
  EXPECT_EQ(user[0].category, Leaf::Functional);
  EXPECT_EQ(user[0].influences, std::vector<std::string>{"provide_info"});
  EXPECT_TRUE(warnings.empty());

  auto quality = derive_quality_values(m);
  ASSERT_EQ(quality.size(), 1u);
  EXPECT_EQ(quality[0].category, Leaf::MustBe);

  auto set = derive_all(m);
  EXPECT_EQ(summary(set), "15 items (9 cost, 2 risk, 2 business, 1 user, 1 quality)");
  EXPECT_EQ(set.items.front().id, "item_r1_cost_1");
  EXPECT_EQ(set.items.back().id, "item_r5_quality_15");
}

TEST(Derive, VacuousModels) {
  auto empty = new_model("Empty");
  EXPECT_TRUE(derive_costs(empty).empty());
  EXPECT_TRUE(derive_business_values(empty).empty());
  EXPECT_TRUE(derive_quality_values(empty).empty());

  auto actors = new_model("Actors");
  actors.add_element(ElementKind::User, "u", "User");
  actors.add_element(ElementKind::Operator, "o", "Operator");
  auto set = derive_all(actors);
  EXPECT_TRUE(set.items.empty());
  EXPECT_FALSE(has_errors(set.warnings));
}

TEST(Derive, TemplatesAndMultiEntries) {
  auto m = small_valid();
  m.add_element(ElementKind::ObservedEvent, "e", "Free generation",
                {{"hinders", "non_maleficence", "harmful text", RiskLevel::High},
                 {"hinders", "transparency", "", RiskLevel::Medium}});
  m.add_relation(RelationKind::Association, "e", "f");
  auto risks = derive_risks(m);
  ASSERT_EQ(risks.size(), 2u);
  EXPECT_EQ(risks[0].description, "Free generation: harmful text");
  EXPECT_EQ(risks[1].description, "Free generation");
  auto costs = derive_costs(m);
  ASSERT_EQ(costs.size(), 3u);
  EXPECT_EQ(costs[2].description, "external API usage fees for Engine");
}

TEST(Derive, EmotionalAndAttractiveLeaves) {
  auto m = new_model("Chat");
  m.add_element(ElementKind::UserActivity, "chat", "Casual chat",
                {{"yields_user_value", "emotional", "enjoying casual conversations", {}},
                 {"yields_quality_value", "attractive", "natural conversation", {}}});
  m.add_element(ElementKind::DialogueService, "svc", "Chat service");
  m.add_relation(RelationKind::Serving, "svc", "chat");
  auto set = derive_all(m);
  ASSERT_EQ(set.items.size(), 2u);
  EXPECT_EQ(set.items[0].category, Leaf::Emotional);
  EXPECT_EQ(set.items[1].category, Leaf::Attractive);
}

TEST(Derive, InfluenceWithoutBusinessValueWarns) {
  auto m = new_model("W");
  m.add_element(ElementKind::UserActivity, "ua", "Use", {{"yields_user_value", "functional", "", {}}});
  m.add_element(ElementKind::OperatorActivity, "oa", "Run");
  m.add_element(ElementKind::DialogueService, "svc", "Svc");
  m.add_relation(RelationKind::Serving, "svc", "ua");
  m.add_relation(RelationKind::Influence, "ua", "oa");
  auto set = derive_all(m);
  std::vector<std::string> codes;
  for (const auto& w : set.warnings) codes.push_back(w.code);
  EXPECT_EQ(codes, (std::vector<std::string>{"W102", "W110"}));

  // No yields_user_value: no items and no W110.
  auto n = new_model("N");
  n.add_element(ElementKind::UserActivity, "ua", "Use");
  n.add_element(ElementKind::DialogueService, "svc", "Svc");
  n.add_relation(RelationKind::Serving, "svc", "ua");
  std::vector<Diagnostic> warnings;
  EXPECT_TRUE(derive_user_values(n, &warnings).empty());
  EXPECT_TRUE(warnings.empty());
}

TEST(Derive, RefusesInvalidModel) {
  auto m = new_model("Bad");
  m.add_element(ElementKind::SystemComponent, "c", "C");
  try {
    derive_all(m);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), "E200");
  }
}

TEST(Derive, OrderInsensitive) {
  std::mt19937 rng(99);
  for (const auto& name : oracle::kCorpus) {
    auto m = oracle::load(name);
    auto reference = tuples(derive_all(m).items);
    for (int i = 0; i < 10; ++i) {
      EXPECT_EQ(tuples(derive_all(shuffled(m, rng)).items), reference) << name;
    }
  }
}

TEST(Derive, InvariantsOnCorpus) {
  for (const auto& name : oracle::kCorpus) {
    auto m = oracle::load(name);
    auto set = derive_all(m);
    std::set<std::string> ids;
    for (const auto& it : set.items) {
      EXPECT_TRUE(ids.insert(it.id).second) << it.id;
      ASSERT_FALSE(it.sources.empty());
      for (const auto& s : it.sources) {
        const Element* src = m.find(s);
        ASSERT_NE(src, nullptr) << s;
        switch (it.rule) {
          case Rule::R1_cost:
            EXPECT_TRUE(src->kind == ElementKind::SystemComponent || src->kind == ElementKind::ObservedEvent);
            EXPECT_EQ(branch_of(it.category), Branch::Cost);
            break;
          case Rule::R2_risk:
            EXPECT_EQ(src->kind, ElementKind::ObservedEvent);
            EXPECT_EQ(branch_of(it.category), Branch::Risk);
            EXPECT_TRUE(it.severity);
            break;
          case Rule::R3_business:
            EXPECT_EQ(src->kind, ElementKind::OperatorActivity);
            EXPECT_EQ(group_of(it.category), LeafGroup::BusinessValue);
            break;
          case Rule::R4_user:
            EXPECT_EQ(src->kind, ElementKind::UserActivity);
            EXPECT_EQ(group_of(it.category), LeafGroup::UserValue);
            break;
          case Rule::R5_quality:
            EXPECT_EQ(src->kind, ElementKind::UserActivity);
            EXPECT_EQ(group_of(it.category), LeafGroup::QualityValue);
            break;
        }
        if (it.rule != Rule::R2_risk) EXPECT_FALSE(it.severity);
      }
    }
    // Every event contributes an item or is flagged W101.
    for (const auto& e : elements_of_kind(m, ElementKind::ObservedEvent)) {
      bool used = std::any_of(set.items.begin(), set.items.end(), [&](const EvaluationItem& it) {
        return std::find(it.sources.begin(), it.sources.end(), e.id) != it.sources.end();
      });
      bool flagged = std::any_of(set.warnings.begin(), set.warnings.end(), [&](const Diagnostic& d) {
        return d.code == "W101" && d.subject == e.id;
      });
      EXPECT_TRUE(used || flagged) << e.id;
    }
  }
}

TEST(ItemsetIo, RoundTripAndGolden) {
  for (const auto& name : oracle::kCorpus) {
    auto set = derive_all(oracle::load(name));
    std::string text = serialize(set);
    EXPECT_EQ(serialize(derive_all(oracle::load(name))), text);
    EXPECT_EQ(deserialize(text), set) << name;
    EXPECT_EQ(text, oracle::read_text(oracle::golden_path(name + ".items.json"))) << name;
  }
  EXPECT_THROW(deserialize("{\"format\": \"other\"}"), ModelError);
  EXPECT_THROW(deserialize("not json"), ModelError);
}

TEST(Attach, FaqCounts) {
  auto m = oracle::load("faq_chatbot");
  auto set = derive_all(m);
  auto attached = attach(m, set);
  EXPECT_TRUE(attached.frozen());
  std::size_t items = 0, principles = 0;
  for (const auto& e : attached.elements()) {
    if (e.kind == ElementKind::Principle) ++principles;
    else if (is_motivation_kind(e.kind)) ++items;
  }
  EXPECT_EQ(items, 15u);
  EXPECT_EQ(principles, 2u);
  EXPECT_GE(attached.relations().size() - m.relations().size(), 15u);
  EXPECT_TRUE(validate(attached).empty());
}

TEST(Attach, SoundOnCorpus) {
  for (const auto& name : oracle::kCorpus) {
    auto m = oracle::load(name);
    auto attached = attach(m, derive_all(m));
    EXPECT_FALSE(has_errors(validate(attached))) << name;
    // Every item keeps an edge to each of its sources.
    for (const auto& it : derive_all(m).items) {
      for (const auto& s : it.sources) {
        auto around = neighbors(attached, it.id);
        EXPECT_TRUE(std::any_of(around.begin(), around.end(), [&](const Element& e) { return e.id == s; }))
            << it.id << " " << s;
      }
    }
  }
}

TEST(Attach, EmptyItemsetAndGuards) {
  auto m = small_valid();
  EvaluationItemSet empty{m.system_name(), {}, {}};
  auto same = attach(m, empty);
  EXPECT_TRUE(same.frozen());
  EXPECT_EQ(same, m);

  auto faq = oracle::load("faq_chatbot");
  auto set = derive_all(faq);
  auto once = attach(faq, set);
  try {
    attach(once, set);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), "E201");
  }
  EXPECT_THROW(attach(m, set), ModelError);

  auto broken = set;
  broken.items[0].sources = {"ghost"};
  EXPECT_THROW(attach(faq, broken), ModelError);
  broken.items[0].sources.clear();
  EXPECT_THROW(attach(faq, broken), ModelError);
}
