#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsalign/diagnostic.hpp"
#include "dsalign/dsl/lexer.hpp"
#include "dsalign/model.hpp"
#include "dsalign/taxonomy.hpp"

namespace dsalign::dsl {

struct ParseResult {
  std::optional<AlignmentModel> model;  // present iff no error-level diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

// Statement keyword for each declarable kind.
inline std::string_view statement_keyword(ElementKind k) {
  switch (k) {
    case ElementKind::User: return "actor user";
    case ElementKind::Operator: return "actor operator";
    case ElementKind::UserActivity: return "user_activity";
    case ElementKind::OperatorActivity: return "operator_activity";
    case ElementKind::DialogueService: return "service";
    case ElementKind::SystemComponent: return "component";
    case ElementKind::ComponentFunction: return "function";
    case ElementKind::DataModel: return "data";
    case ElementKind::ObservedEvent: return "event";
    default: return "";
  }
}

// Block keys accepted for each statement, in canonical output order. Reference
// keys (by, serves, ...) become relations; the rest become attributes.
inline std::span<const std::string_view> block_keys(ElementKind k) {
  static constexpr std::array<std::string_view, 3> actor{"description", "role", "about"};
  static constexpr std::array<std::string_view, 6> user_activity{
      "description", "by", "yields_user_value", "yields_quality_value", "influences", "about"};
  static constexpr std::array<std::string_view, 4> operator_activity{
      "description", "by", "yields_business_value", "about"};
  static constexpr std::array<std::string_view, 4> service{"description", "serves", "realized_by",
                                                           "about"};
  static constexpr std::array<std::string_view, 5> component{"description", "runs_on", "serves",
                                                             "uses", "about"};
  static constexpr std::array<std::string_view, 3> function{"description", "uses", "about"};
  static constexpr std::array<std::string_view, 2> data{"description", "about"};
  static constexpr std::array<std::string_view, 4> event{"description", "about", "implies_cost",
                                                         "hinders"};
  switch (k) {
    case ElementKind::User:
    case ElementKind::Operator: return actor;
    case ElementKind::UserActivity: return user_activity;
    case ElementKind::OperatorActivity: return operator_activity;
    case ElementKind::DialogueService: return service;
    case ElementKind::SystemComponent: return component;
    case ElementKind::ComponentFunction: return function;
    case ElementKind::DataModel: return data;
    case ElementKind::ObservedEvent: return event;
    default: return {};
  }
}

inline bool is_reference_key(std::string_view key) {
  return key == "by" || key == "serves" || key == "realized_by" || key == "uses" ||
         key == "about" || key == "influences";
}

// Relation produced by a reference key declared on an element of `owner` kind.
// `owner_is_source` tells which end the declaring element sits on.
struct ReferenceRule {
  RelationKind kind;
  bool owner_is_source;
};

inline ReferenceRule reference_rule(std::string_view key) {
  if (key == "by") return {RelationKind::Assignment, false};
  if (key == "serves") return {RelationKind::Serving, true};
  if (key == "realized_by") return {RelationKind::Realization, false};
  if (key == "uses") return {RelationKind::Access, true};
  if (key == "influences") return {RelationKind::Influence, true};
  return {RelationKind::Association, true};
}

namespace detail {

struct ParsedAttr {
  Attribute attr;
  Token key;
};

struct ParsedRef {
  std::string key;
  Token target;
};

struct Statement {
  ElementKind kind = ElementKind::User;
  Token id;
  std::string name;
  std::string description;
  Token description_key;
  bool has_description = false;
  std::vector<ParsedAttr> attrs;
  std::vector<ParsedRef> refs;
  std::vector<Statement> functions;
};

struct SyntaxError {};

inline std::size_t key_rank(ElementKind kind, std::string_view key) {
  auto keys = block_keys(kind);
  return static_cast<std::size_t>(std::find(keys.begin(), keys.end(), key) - keys.begin());
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
      : tokens_(std::move(tokens)), diags_(diags) {}

  // Returns false when the input holds no usable system block.
  bool parse_file(std::string& system_name, Token& name_token, std::vector<Statement>& out) {
    if (!at_word("system")) {
      error("E100", "expected system block `system \"<name>\" { ... }`", peek());
      return false;
    }
    next();
    if (peek().kind != TokenKind::String) {
      error("E103", std::string("expected system name string, found ") + found(peek()), peek());
      return false;
    }
    name_token = next();
    system_name = name_token.text;
    if (peek().kind != TokenKind::LBrace) {
      error("E103", std::string("expected '{' after system name, found ") + found(peek()), peek());
      return false;
    }
    next();
    while (peek().kind != TokenKind::RBrace && peek().kind != TokenKind::End) {
      try {
        out.push_back(parse_statement());
      } catch (const SyntaxError&) {
        sync_statement();
      }
    }
    if (peek().kind == TokenKind::End) {
      error("E103", "expected '}' to close the system block, found end of input", peek());
      return true;
    }
    next();
    if (peek().kind != TokenKind::End) {
      error("E106", "only one system block is allowed per file", peek());
    }
    return true;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  Token next() {
    Token t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_word(std::string_view w) const {
    return peek().kind == TokenKind::Word && peek().text == w;
  }

  static std::string found(const Token& t) {
    switch (t.kind) {
      case TokenKind::Word: return "'" + t.text + "'";
      case TokenKind::String: return "string \"" + t.text + "\"";
      default: return describe(t.kind);
    }
  }

  void error(std::string code, std::string message, const Token& at) {
    SourceSpan span = at.span;
    if (span.length == 0 && at.kind != TokenKind::End) span.length = 1;
    diags_.push_back(Diagnostic{std::move(code), Severity::Error, std::move(message), span,
                                std::nullopt});
  }

  [[noreturn]] void fail(std::string code, std::string message, const Token& at) {
    error(std::move(code), std::move(message), at);
    throw SyntaxError{};
  }

  void expect(TokenKind kind, std::string_view context) {
    if (peek().kind != kind) {
      fail("E103",
           std::string("expected ") + describe(kind) + " " + std::string(context) + ", found " +
               found(peek()),
           peek());
    }
    next();
  }

  // Skips to the end of the current statement: a ';' or a balanced '}' at the
  // statement's own depth. Stops before a '}' that closes an enclosing block.
  void sync_statement() {
    int depth = 0;
    while (peek().kind != TokenKind::End) {
      TokenKind k = peek().kind;
      if (k == TokenKind::LBrace) {
        ++depth;
      } else if (k == TokenKind::RBrace) {
        if (depth == 0) return;
        if (--depth == 0) {
          next();
          if (peek().kind == TokenKind::Semicolon) next();
          return;
        }
      } else if (k == TokenKind::Semicolon && depth == 0) {
        next();
        return;
      }
      next();
    }
  }

  // Inside a block: skip to after the next ';' or stop before the '}'.
  void sync_entry() {
    int depth = 0;
    while (peek().kind != TokenKind::End) {
      TokenKind k = peek().kind;
      if (k == TokenKind::LBrace) ++depth;
      if (k == TokenKind::RBrace) {
        if (depth == 0) return;
        --depth;
      }
      if (k == TokenKind::Semicolon && depth == 0) {
        next();
        return;
      }
      next();
    }
  }

  std::optional<ElementKind> statement_kind(const Token& kw) {
    const std::string& w = kw.text;
    if (w == "actor") {
      if (at_word("user")) {
        next();
        return ElementKind::User;
      }
      if (at_word("operator")) {
        next();
        return ElementKind::Operator;
      }
      fail("E103", "expected 'user' or 'operator' after 'actor', found " + found(peek()), peek());
    }
    if (w == "user_activity") return ElementKind::UserActivity;
    if (w == "operator_activity") return ElementKind::OperatorActivity;
    if (w == "service") return ElementKind::DialogueService;
    if (w == "component") return ElementKind::SystemComponent;
    if (w == "data") return ElementKind::DataModel;
    if (w == "event") return ElementKind::ObservedEvent;
    return std::nullopt;
  }

  Token identifier(std::string_view what) {
    const Token& t = peek();
    if (t.kind != TokenKind::Word) {
      fail("E103", "expected " + std::string(what) + ", found " + found(t), t);
    }
    if (is_keyword(t.text)) {
      fail("E105", "'" + t.text + "' is a reserved keyword and cannot be used as an identifier", t);
    }
    if (!is_valid_id(t.text)) {
      error("E005", "identifier '" + t.text + "' must match [a-z][a-z0-9_]*", t);
    }
    return next();
  }

  Statement parse_statement() {
    const Token& kw = peek();
    if (kw.kind != TokenKind::Word) {
      fail("E103", "expected a statement keyword, found " + found(kw), kw);
    }
    if (kw.text == "function") {
      fail("E104", "'function' is only allowed inside a component block", kw);
    }
    Token keyword = next();
    auto kind = statement_kind(keyword);
    if (!kind) fail("E104", "unknown statement '" + keyword.text + "'", keyword);
    return parse_element(*kind);
  }

  Statement parse_element(ElementKind kind) {
    Statement st;
    st.kind = kind;
    st.id = identifier("an element identifier");
    if (peek().kind != TokenKind::String) {
      fail("E103", "expected display name string after '" + st.id.text + "', found " + found(peek()),
           peek());
    }
    st.name = next().text;
    if (peek().kind == TokenKind::LBrace) {
      next();
      parse_block(st);
      if (peek().kind == TokenKind::Semicolon) next();
    } else if (peek().kind == TokenKind::Semicolon) {
      next();
    }
    return st;
  }

  void parse_block(Statement& st) {
    while (peek().kind != TokenKind::RBrace) {
      if (peek().kind == TokenKind::End) {
        fail("E103", "expected '}' to close '" + st.id.text + "', found end of input", peek());
      }
      try {
        parse_entry(st);
      } catch (const SyntaxError&) {
        sync_entry();
      }
    }
    next();
  }

  void end_entry() {
    if (peek().kind == TokenKind::RBrace) return;
    expect(TokenKind::Semicolon, "after block entry");
  }

  std::string optional_text() {
    if (peek().kind == TokenKind::String) return next().text;
    return {};
  }

  void parse_entry(Statement& st) {
    const Token& key_tok = peek();
    if (key_tok.kind != TokenKind::Word) {
      fail("E103", "expected an entry key, found " + found(key_tok), key_tok);
    }
    if (key_tok.text == "function") {
      if (st.kind != ElementKind::SystemComponent) {
        fail("E002", "'function' is only allowed inside a component block", key_tok);
      }
      next();
      st.functions.push_back(parse_element(ElementKind::ComponentFunction));
      return;
    }
    auto keys = block_keys(st.kind);
    if (std::find(keys.begin(), keys.end(), key_tok.text) == keys.end()) {
      fail("E002",
           "attribute '" + key_tok.text + "' is not allowed on " +
               std::string(to_string(st.kind)),
           key_tok);
    }
    Token key = next();
    expect(TokenKind::Colon, "after '" + key.text + "'");

    if (is_reference_key(key.text)) {
      st.refs.push_back({key.text, identifier("an element reference")});
      while (peek().kind == TokenKind::Comma) {
        next();
        st.refs.push_back({key.text, identifier("an element reference")});
      }
      end_entry();
      return;
    }

    if (key.text == "description") {
      if (peek().kind != TokenKind::String) {
        fail("E103", "expected description string, found " + found(peek()), peek());
      }
      Token text = next();
      if (st.has_description) {
        error("E107", "description declared more than once", key);
      }
      st.has_description = true;
      st.description = text.text;
      st.description_key = key;
      end_entry();
      return;
    }

    if (key.text == "role") {
      if (peek().kind != TokenKind::String) {
        fail("E103", "expected role string, found " + found(peek()), peek());
      }
      st.attrs.push_back({Attribute{"role", next().text, {}, std::nullopt}, key});
      end_entry();
      return;
    }

    if (peek().kind != TokenKind::Word) {
      fail("E103", "expected a value for '" + key.text + "', found " + found(peek()), peek());
    }
    Token value = next();
    Attribute attr{key.text, value.text, {}, std::nullopt};

    if (key.text == "runs_on") {
      if (!is_runs_on_value(value.text)) {
        error("E121", "runs_on must be one of server, device, external_api, browser; found '" +
                          value.text + "'",
              value);
      }
      for (const auto& a : st.attrs) {
        if (a.attr.key == "runs_on") error("E107", "runs_on declared more than once", key);
      }
    } else {
      LeafGroup group = LeafGroup::UserValue;
      std::string what = "user value";
      if (key.text == "yields_quality_value") {
        group = LeafGroup::QualityValue;
        what = "quality value";
      } else if (key.text == "yields_business_value") {
        group = LeafGroup::BusinessValue;
        what = "business value";
      } else if (key.text == "implies_cost") {
        group = LeafGroup::Cost;
        what = "cost";
      } else if (key.text == "hinders") {
        group = LeafGroup::Risk;
        what = "principle";
      }
      if (auto leaf = parse_leaf_in(group, value.text)) {
        attr.value = std::string(leaf_name(*leaf));
      } else {
        std::string msg = "unknown " + what + " '" + value.text + "'";
        if (auto suggestion = suggest_leaf(group, value.text)) {
          msg += "; did you mean '" + *suggestion + "'?";
        }
        error("E120", msg, value);
      }
      if (key.text == "hinders") {
        attr.severity = RiskLevel::Medium;
        if (at_word("severity")) {
          next();
          expect(TokenKind::Colon, "after 'severity'");
          if (peek().kind != TokenKind::Word) {
            fail("E103", "expected low, medium or high, found " + found(peek()), peek());
          }
          Token level = next();
          if (auto parsed = parse_risk_level(level.text)) {
            attr.severity = *parsed;
          } else {
            error("E121", "severity must be low, medium or high; found '" + level.text + "'", level);
          }
        }
      }
      attr.text = optional_text();
    }
    st.attrs.push_back({std::move(attr), key});
    end_entry();
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;
};

inline Diagnostic located(Diagnostic d, const Token& at) {
  d.location = at.span;
  if (d.location->length == 0) d.location->length = 1;
  return d;
}

inline void flatten(const std::vector<Statement>& in, std::vector<const Statement*>& out) {
  for (const auto& st : in) {
    out.push_back(&st);
    flatten(st.functions, out);
  }
}

inline void build_model(const std::string& system_name, const Token& name_token,
                        const std::vector<Statement>& statements, ParseResult& result) {
  std::optional<AlignmentModel> model;
  try {
    model.emplace(system_name);
  } catch (const ModelError& e) {
    result.diagnostics.push_back(located(e.diagnostic(), name_token));
    return;
  }

  std::vector<const Statement*> order;
  flatten(statements, order);

  for (const Statement* st : order) {
    Element e{st->id.text, st->kind, st->name, st->description, {}};
    std::vector<ParsedAttr> attrs = st->attrs;
    std::stable_sort(attrs.begin(), attrs.end(), [&](const ParsedAttr& a, const ParsedAttr& b) {
      return key_rank(st->kind, a.attr.key) < key_rank(st->kind, b.attr.key);
    });
    for (auto& a : attrs) e.attrs.push_back(std::move(a.attr));
    try {
      model->add_element(std::move(e));
    } catch (const ModelError& err) {
      result.diagnostics.push_back(located(err.diagnostic(), st->id));
    }
  }

  auto add = [&](RelationKind kind, const std::string& source, const std::string& target,
                 const Token& at) {
    try {
      model->add_relation(kind, source, target);
    } catch (const ModelError& err) {
      result.diagnostics.push_back(located(err.diagnostic(), at));
    }
  };

  for (const Statement* st : order) {
    std::vector<ParsedRef> refs = st->refs;
    std::stable_sort(refs.begin(), refs.end(), [&](const ParsedRef& a, const ParsedRef& b) {
      return key_rank(st->kind, a.key) < key_rank(st->kind, b.key);
    });
    for (const auto& ref : refs) {
      ReferenceRule rule = reference_rule(ref.key);
      if (rule.owner_is_source) {
        add(rule.kind, st->id.text, ref.target.text, ref.target);
      } else {
        add(rule.kind, ref.target.text, st->id.text, ref.target);
      }
    }
    for (const auto& fn : st->functions) {
      add(RelationKind::Realization, st->id.text, fn.id.text, fn.id);
    }
  }

  if (!has_errors(result.diagnostics)) result.model = std::move(model);
}

}  // namespace detail

// Parses one `.dsa` document. Never throws; all problems are reported as
// diagnostics carrying source spans.
inline ParseResult parse(std::string_view text, const std::string& file = "<input>") {
  ParseResult result;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto tokens = tokenize(text, file, result.diagnostics);
  detail::Parser parser(std::move(tokens), result.diagnostics);
  std::string system_name;
  Token name_token;
  std::vector<detail::Statement> statements;
  bool have_system = parser.parse_file(system_name, name_token, statements);
  if (!have_system || has_errors(result.diagnostics)) return result;
  detail::build_model(system_name, name_token, statements, result);
  return result;
}

// Offset of the first byte that breaks UTF-8 well-formedness, if any.
inline std::optional<std::size_t> first_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  auto cont = [&](std::size_t k) {
    return k < s.size() && (static_cast<unsigned char>(s[k]) & 0xC0) == 0x80;
  };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t n = 0;
    std::uint32_t cp = 0;
    std::uint32_t min = 0;
    if ((c & 0xE0) == 0xC0) {
      n = 1, cp = c & 0x1F, min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      n = 2, cp = c & 0x0F, min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      n = 3, cp = c & 0x07, min = 0x10000;
    } else {
      return i;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      if (!cont(i + k)) return i;
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += n + 1;
  }
  return std::nullopt;
}

// Reads and parses a `.dsa` file. E190 when unreadable, E191 on invalid UTF-8.
inline ParseResult load_file(const std::string& path) {
  ParseResult result;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    result.diagnostics.push_back(Diagnostic{"E190", Severity::Error, "cannot read file '" + path + "'",
                                            SourceSpan{path, 1, 1, 0}, std::nullopt});
    return result;
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    result.diagnostics.push_back(Diagnostic{"E190", Severity::Error, "cannot read file '" + path + "'",
                                            SourceSpan{path, 1, 1, 0}, std::nullopt});
    return result;
  }
  if (auto bad = first_invalid_utf8(text)) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < *bad; ++i) {
      unsigned char c = static_cast<unsigned char>(text[i]);
      if (c == '\n') {
        ++line;
        column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++column;
      }
    }
    result.diagnostics.push_back(Diagnostic{"E191", Severity::Error,
                                            "file is not valid UTF-8 (byte offset " +
                                                std::to_string(*bad) + ")",
                                            SourceSpan{path, line, column, 1}, std::nullopt});
    return result;
  }
  return parse(text, path);
}

}  // namespace dsalign::dsl
