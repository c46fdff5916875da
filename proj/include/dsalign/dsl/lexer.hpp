#pragma once

#include <array>
#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "dsalign/diagnostic.hpp"

namespace dsalign::dsl {

enum class TokenKind { Word, String, LBrace, RBrace, Colon, Semicolon, Comma, End };

inline const char* describe(TokenKind k) {
  switch (k) {
    case TokenKind::Word: return "identifier";
    case TokenKind::String: return "string";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Comma: return "','";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // decoded contents for strings, lexeme otherwise
  SourceSpan span;
};

inline constexpr std::array<std::string_view, 26> kKeywords{
    "system",       "actor",          "user",
    "operator",     "user_activity",  "operator_activity",
    "service",      "component",      "function",
    "data",         "event",          "by",
    "serves",       "realized_by",    "uses",
    "about",        "influences",     "yields_user_value",
    "yields_quality_value", "yields_business_value", "runs_on",
    "implies_cost", "hinders",        "severity",
    "description",  "role",
};

inline bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

// Splits .dsa text into tokens. Never throws; lexical problems become E101/E102
// diagnostics and scanning resumes at the next byte. Columns count code points.
class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run(std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= text_.size()) {
        out.push_back(Token{TokenKind::End, "", span_here(0)});
        return out;
      }
      char c = text_[pos_];
      SourceSpan start = span_here(1);
      switch (c) {
        case '{': out.push_back(single(TokenKind::LBrace)); continue;
        case '}': out.push_back(single(TokenKind::RBrace)); continue;
        case ':': out.push_back(single(TokenKind::Colon)); continue;
        case ';': out.push_back(single(TokenKind::Semicolon)); continue;
        case ',': out.push_back(single(TokenKind::Comma)); continue;
        case '"': out.push_back(string_literal(diags)); continue;
        default: break;
      }
      if (is_word_start(c)) {
        std::size_t begin = pos_;
        while (pos_ < text_.size() && is_word_char(text_[pos_])) advance();
        start.length = static_cast<int>(pos_ - begin);
        out.push_back(Token{TokenKind::Word, std::string(text_.substr(begin, pos_ - begin)), start});
        continue;
      }
      std::size_t begin = pos_;
      advance_code_point();
      start.length = static_cast<int>(pos_ - begin);
      diags.push_back(Diagnostic{"E101", Severity::Error,
                                 "unexpected character '" +
                                     printable(text_.substr(begin, pos_ - begin)) + "'",
                                 start, std::nullopt});
    }
  }

 private:
  static bool is_word_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_word_char(char c) { return is_word_start(c) || (c >= '0' && c <= '9'); }

  static std::string printable(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
      if (c < 0x20 || c >= 0x7f) {
        static const char* hex = "0123456789abcdef";
        out += "\\x";
        out += hex[c >> 4];
        out += hex[c & 0xf];
      } else {
        out += static_cast<char>(c);
      }
    }
    return out;
  }

  SourceSpan span_here(int length) const { return SourceSpan{file_, line_, column_, length}; }

  void advance() {
    unsigned char c = static_cast<unsigned char>(text_[pos_++]);
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++column_;
    }
  }

  void advance_code_point() {
    advance();
    while (pos_ < text_.size() && (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80) {
      ++pos_;
    }
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token single(TokenKind kind) {
    Token t{kind, std::string(1, text_[pos_]), span_here(1)};
    advance();
    return t;
  }

  Token string_literal(std::vector<Diagnostic>& diags) {
    Token t{TokenKind::String, "", span_here(0)};
    std::size_t begin = pos_;
    advance();  // opening quote
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '"') {
        advance();
        t.span.length = static_cast<int>(pos_ - begin);
        return t;
      }
      if (c == '\n') break;
      if (c == '\\' && pos_ + 1 < text_.size()) {
        advance();
        char e = text_[pos_];
        switch (e) {
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          case '"': t.text += '"'; break;
          case '\\': t.text += '\\'; break;
          default:
            t.text += '\\';
            t.text += e;
            break;
        }
        if (e == '\n') break;
        advance();
        continue;
      }
      t.text += c;
      advance();
    }
    t.span.length = static_cast<int>(pos_ - begin);
    diags.push_back(Diagnostic{"E102", Severity::Error, "unterminated string literal",
                               SourceSpan{file_, t.span.line, t.span.column, 1}, std::nullopt});
    return t;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

inline std::vector<Token> tokenize(std::string_view text, const std::string& file,
                                   std::vector<Diagnostic>& diags) {
  return Lexer(text, file).run(diags);
}

}  // namespace dsalign::dsl
