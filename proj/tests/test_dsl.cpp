#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "dsalign/derivation.hpp"
#include "dsalign/dsl/format.hpp"
#include "dsalign/dsl/parse.hpp"
#include "support/oracles.hpp"

using namespace dsalign;

namespace {

std::vector<std::string> codes(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

std::string faq_text() { return oracle::read_text(oracle::fixture_path("faq_chatbot")); }

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    }
  }
  return d[a.size()][b.size()];
}

}  // namespace

TEST(Parse, FaqFixtureShape) {
  auto r = dsl::parse(faq_text(), "faq_chatbot.dsa");
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.diagnostics.empty());
  const auto& m = *r.model;
  EXPECT_EQ(elements_of_kind(m, ElementKind::SystemComponent).size(), 3u);
  EXPECT_EQ(elements_of_kind(m, ElementKind::DataModel).size(), 4u);
  EXPECT_EQ(elements_of_kind(m, ElementKind::DialogueService).size(), 1u);
  EXPECT_EQ(elements_of_kind(m, ElementKind::OperatorActivity).size(), 2u);
  // Nested functions are realized by their component.
  auto realized = neighbors(m, "faq_search", RelationKind::Realization, Direction::Out);
  ASSERT_EQ(realized.size(), 1u);
  EXPECT_EQ(realized[0].id, "faq_retrieval");
}

TEST(Parse, EmptyInput) {
  auto r = dsl::parse("");
  EXPECT_FALSE(r.model);
  EXPECT_EQ(codes(r.diagnostics), std::vector<std::string>{"E100"});
}

TEST(Parse, ImplicitRelations) {
  auto r = dsl::parse(R"(system "S" {
  actor user u "U";
  user_activity ua "Ask" { by: u; }
  service svc "Svc" { serves: ua; realized_by: f; }
  component c "C" { uses: d; function f "F" { uses: d; } }
  data d "D";
  event e "E" { about: d, f; implies_cost: human "x"; }
})");
  ASSERT_TRUE(r.ok()) << (r.diagnostics.empty() ? "" : r.diagnostics[0].message);
  std::vector<std::tuple<RelationKind, std::string, std::string>> rels;
  for (const auto& rel : r.model->relations()) rels.emplace_back(rel.kind, rel.source, rel.target);
  std::vector<std::tuple<RelationKind, std::string, std::string>> expected{
      {RelationKind::Assignment, "u", "ua"},   {RelationKind::Serving, "svc", "ua"},
      {RelationKind::Realization, "f", "svc"}, {RelationKind::Access, "c", "d"},
      {RelationKind::Realization, "c", "f"},   {RelationKind::Access, "f", "d"},
      {RelationKind::Association, "e", "d"},   {RelationKind::Association, "e", "f"},
  };
  EXPECT_EQ(rels, expected);
  EXPECT_EQ(r.model->find("e")->attr("implies_cost")->value, "human_resources");
}

TEST(Parse, UnknownLeafSuggestsAndPointsAtToken) {
  std::string text = "system \"S\" {\n  user_activity a \"A\" { yields_user_value: funktional; }\n}\n";
  auto r = dsl::parse(text, "x.dsa");
  ASSERT_EQ(codes(r.diagnostics), std::vector<std::string>{"E120"});
  const auto& d = r.diagnostics[0];
  EXPECT_NE(d.message.find("did you mean 'functional'"), std::string::npos);
  ASSERT_TRUE(d.location);
  EXPECT_EQ(d.location->file, "x.dsa");
  EXPECT_EQ(d.location->line, 2);
  EXPECT_EQ(d.location->column, 44);
  EXPECT_EQ(d.location->length, 10);
  EXPECT_EQ(render(d), "x.dsa:2:44: error E120: " + d.message);
}

// Suggestions agree with a brute-force nearest-leaf search over each group.
TEST(Parse, SuggestionMatchesBruteForce) {
  const std::vector<std::pair<LeafGroup, std::vector<std::string>>> groups{
      {LeafGroup::UserValue, {"functional", "emotional", "self_expressive", "social"}},
      {LeafGroup::QualityValue, {"must_be", "attractive"}},
      {LeafGroup::BusinessValue, {"revenue_increase", "cost_reduction", "new_revenue"}},
      {LeafGroup::Risk,
       {"transparency", "justice_fairness", "non_maleficence", "responsibility", "privacy",
        "beneficence", "freedom_autonomy"}},
      {LeafGroup::Cost, {"human", "information", "it"}},
  };
  std::size_t leaves = 0;
  std::mt19937 rng(7);
  for (const auto& [group, names] : groups) {
    leaves += names.size();
    for (const auto& name : names) {
      std::vector<std::string> probes;
      for (std::size_t i = 0; i < name.size(); ++i) {
        probes.push_back(name.substr(0, i) + name.substr(i + 1));
        probes.push_back(name.substr(0, i) + "q" + name.substr(i + 1));
        std::string z = name;
        z[i] = 'z';
        probes.push_back(z);
      }
      for (int k = 0; k < 20; ++k) {
        std::string p = name;
        int edits = 1 + static_cast<int>(rng() % 4);
        for (int e = 0; e < edits && !p.empty(); ++e) p[rng() % p.size()] = static_cast<char>('a' + rng() % 26);
        probes.push_back(p);
      }
      for (const auto& probe : probes) {
        std::optional<std::string> best;
        int best_d = 3;
        for (const auto& candidate : names) {
          int d = levenshtein(probe, candidate);
          if (d < best_d) {
            best_d = d;
            best = candidate;
          }
        }
        if (best_d == 0) continue;
        EXPECT_EQ(suggest_leaf(group, probe), best) << probe;
      }
    }
  }
  EXPECT_EQ(leaves, 19u);
}

TEST(Parse, SyntaxErrorsCarrySpans) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"component c \"C\";", "E100"},
      {"system \"S\" { data d \"D\" ", "E103"},
      {"system \"S\" { data d \"unterminated }", "E102"},
      {"system \"S\" { data d @ }", "E101"},
      {"system \"S\" { widget w \"W\"; }", "E104"},
      {"system \"S\" { data service \"D\"; }", "E105"},
      {"system \"S\" { data d \"D\"; }\nsystem \"T\" { }", "E106"},
      {"system \"S\" { data d \"D\" { description: \"a\"; description: \"b\"; } }", "E107"},
      {"system \"S\" { data d \"D\" { runs_on: server; } }", "E002"},
      {"system \"S\" { function f \"F\"; }", "E104"},
      {"system \"S\" { data D1 \"D\"; }", "E005"},
      {"system \"S\" { component c \"C\" { runs_on: cloud; function f \"F\"; } }", "E121"},
      {"system \"S\" { event e \"E\" { hinders: privacy severity: huge; } }", "E121"},
      {"system \"S\" { data d \"D\"; data d \"D2\"; }", "E001"},
      {"system \"S\" { component c \"C\" { uses: ghost; function f \"F\"; } }", "E003"},
      {"system \"\" { }", "E000"},
  };
  for (const auto& [text, code] : cases) {
    auto r = dsl::parse(text, "t.dsa");
    auto found = codes(r.diagnostics);
    EXPECT_NE(std::find(found.begin(), found.end(), code), found.end()) << text;
    EXPECT_FALSE(r.model) << text;
    for (const auto& d : r.diagnostics) {
      ASSERT_TRUE(d.location) << text;
      EXPECT_GE(d.location->line, 1);
      EXPECT_GE(d.location->column, 1);
      EXPECT_EQ(d.location->file, "t.dsa");
    }
  }
}

TEST(Parse, RecoversAndReportsSeveralErrors) {
  auto r = dsl::parse(R"(system "S" {
  data a "A" { bogus: x; }
  data b "B";
  widget w "W";
  data c "C" { runs_on: server; }
})");
  EXPECT_EQ(codes(r.diagnostics), (std::vector<std::string>{"E002", "E104", "E002"}));
}

TEST(Parse, CommentsCrlfAndBom) {
  std::string text = "\xEF\xBB\xBFsystem \"S\" { # header\r\n  data d \"D\"; # trailing\r\n}\r\n";
  auto r = dsl::parse(text);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->elements().size(), 1u);
}

TEST(Format, RoundTripCorpus) {
  for (const auto& name : oracle::kCorpus) {
    auto first = oracle::load(name);
    std::string text = dsl::format(first);
    auto second = dsl::parse(text);
    ASSERT_TRUE(second.ok()) << name;
    EXPECT_EQ(*second.model, first) << name;
    EXPECT_EQ(dsl::format(*second.model), text) << name;
    // Committed fixtures are already canonical.
    EXPECT_EQ(text, oracle::read_text(oracle::fixture_path(name))) << name;
  }
}

TEST(Format, ShuffledAttributesCanonicalize) {
  std::string text = faq_text();
  std::string a = "    yields_user_value: functional \"the ability to obtain information\";\n";
  std::string b =
      "    yields_quality_value: must_be \"information available at any time without service "
      "interruption\";\n";
  std::string c = "    influences: provide_info;\n";
  auto pos = text.find(a);
  ASSERT_NE(pos, std::string::npos);
  std::string shuffled = text;
  shuffled.replace(pos, a.size() + b.size() + c.size(), c + b + a);
  ASSERT_NE(shuffled, text);
  auto r = dsl::parse(shuffled);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(dsl::format(*r.model), text);
}

TEST(Format, RefusesInvalidAndDerivedModels) {
  auto m = new_model("S");
  m.add_element(ElementKind::SystemComponent, "c", "C");
  EXPECT_THROW(dsl::format(m), ModelError);

  auto faq = oracle::load("faq_chatbot");
  auto attached = attach(faq, derive_all(faq));
  try {
    dsl::format(attached);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), "E150");
  }
}

TEST(Format, EscapesStrings) {
  auto r = dsl::parse("system \"Say \\\"hi\\\"\" { data d \"a\\\\b\" { description: \"line\\nbreak\"; } }");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->system_name(), "Say \"hi\"");
  EXPECT_EQ(r.model->find("d")->description, "line\nbreak");
  auto again = dsl::parse(dsl::format(*r.model));
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(*again.model, *r.model);
}

TEST(LoadFile, Errors) {
  auto missing = dsl::load_file("/nonexistent/dir/x.dsa");
  ASSERT_EQ(codes(missing.diagnostics), std::vector<std::string>{"E190"});

  auto path = std::filesystem::temp_directory_path() / "dsalign_bad_utf8.dsa";
  {
    std::ofstream f(path, std::ios::binary);
    f << "system \"S\" {\n  data d \"caf\xC3\x28\";\n}\n";
  }
  auto bad = dsl::load_file(path.string());
  ASSERT_EQ(codes(bad.diagnostics), std::vector<std::string>{"E191"});
  ASSERT_TRUE(bad.diagnostics[0].location);
  EXPECT_EQ(bad.diagnostics[0].location->line, 2);
  std::filesystem::remove(path);

  EXPECT_TRUE(dsl::load_file(oracle::fixture_path("faq_chatbot")).ok());
}

TEST(Utf8, StrictDecoder) {
  EXPECT_FALSE(dsl::first_invalid_utf8("plain ascii"));
  EXPECT_FALSE(dsl::first_invalid_utf8("\xE2\x82\xAC \xF0\x9F\x98\x80"));
  EXPECT_EQ(dsl::first_invalid_utf8("ab\xC0\x80"), 2u);          // overlong
  EXPECT_EQ(dsl::first_invalid_utf8("\xED\xA0\x80"), 0u);        // surrogate
  EXPECT_EQ(dsl::first_invalid_utf8("x\xF4\x90\x80\x80"), 1u);   // above U+10FFFF
  EXPECT_EQ(dsl::first_invalid_utf8("\xE2\x82"), 0u);            // truncated
}

// parse() is total: random bytes and corrupted fixtures only ever produce
// diagnostics, and a model is present exactly when no error was reported.
TEST(Parse, FuzzTotality) {
  std::mt19937 rng(20240601);
  std::string base = faq_text();
  const std::string alphabet = "{};:,\"#\\ \n\tabcz_019@";
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    if (i % 3 == 0) {
      std::size_t n = rng() % 200;
      for (std::size_t k = 0; k < n; ++k) text += static_cast<char>(rng() % 256);
    } else {
      text = base;
      int edits = 1 + static_cast<int>(rng() % 6);
      for (int e = 0; e < edits; ++e) {
        std::size_t at = rng() % text.size();
        switch (rng() % 3) {
          case 0: text.erase(at, 1 + rng() % 12); break;
          case 1: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
          default: text[at] = alphabet[rng() % alphabet.size()]; break;
        }
        if (text.empty()) text = " ";
      }
    }
    dsl::ParseResult r;
    ASSERT_NO_THROW(r = dsl::parse(text)) << i;
    EXPECT_EQ(r.model.has_value(), !has_errors(r.diagnostics)) << i;
    for (const auto& d : r.diagnostics) {
      if (d.code.rfind("E1", 0) == 0) {
        ASSERT_TRUE(d.location) << d.code;
        EXPECT_GE(d.location->line, 1);
        EXPECT_GE(d.location->column, 1);
      }
    }
  }
}
