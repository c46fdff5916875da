#pragma once

#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsalign {

enum class Severity { Error, Warning };

inline const char* to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

// 1-based position of a token in a source file. `length` is in bytes.
struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;

  bool operator==(const SourceSpan&) const = default;
};

// Stable diagnostic codes. A code is never reused for a different meaning.
//
//   E000  empty system name
//   E001  duplicate element id (or relation with identical endpoints and kind)
//   E002  attribute key not allowed on this element kind
//   E003  reference to an unknown element id
//   E004  relation triple not in the permitted-connections table
//   E005  malformed identifier (must match [a-z][a-z0-9_]*)
//   E006  second User or Operator element
//   E007  mutation of a frozen model
//   E010  system component realizes no component function
//   E011  observed event is not associated with a component, function or data
//   E100  expected system block
//   E101  unexpected character
//   E102  unterminated string literal
//   E103  unexpected token
//   E104  unknown statement keyword
//   E105  reserved keyword used as identifier
//   E106  content after the system block
//   E107  attribute declared twice where only one is allowed
//   E120  unknown or misplaced taxonomy leaf
//   E121  invalid enumeration value (runs_on, severity)
//   E150  model cannot be expressed in .dsa syntax
//   E190  file cannot be read
//   E191  file is not valid UTF-8
//   E200  derivation refused: model has validation errors
//   E201  itemset does not belong to the model, or was already attached
//   E300  export refused: model has validation errors
//   E400  duplicate system names in a comparison
//   E401  comparison needs at least one itemset
//   W101  observed event implies no cost and hinders no principle
//   W102  operator activity yields no business value
//   W103  user activity is not served by any dialogue service
//   W104  data/model is not accessed by any system component
//   W105  association outside the typed table (fallback)
//   W110  influences target yields no business value
struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  std::string message;
  std::optional<SourceSpan> location;
  std::optional<std::string> subject;

  bool is_error() const { return severity == Severity::Error; }
  bool operator==(const Diagnostic&) const = default;
};

inline Diagnostic make_error(std::string code, std::string message,
                             std::optional<std::string> subject = std::nullopt) {
  return Diagnostic{std::move(code), Severity::Error, std::move(message), std::nullopt,
                    std::move(subject)};
}

inline Diagnostic make_warning(std::string code, std::string message,
                               std::optional<std::string> subject = std::nullopt) {
  return Diagnostic{std::move(code), Severity::Warning, std::move(message), std::nullopt,
                    std::move(subject)};
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.is_error()) return true;
  }
  return false;
}

// `<file>:<line>:<col>: <severity> <code>: <message>`. Diagnostics without a
// location fall back to `<fallback_file>: ...`.
inline std::string render(const Diagnostic& d, const std::string& fallback_file = "",
                          bool color = false) {
  std::ostringstream os;
  if (d.location) {
    os << d.location->file << ':' << d.location->line << ':' << d.location->column << ": ";
  } else if (!fallback_file.empty()) {
    os << fallback_file << ": ";
  }
  if (color) os << (d.is_error() ? "\x1b[1;31m" : "\x1b[1;33m");
  os << to_string(d.severity) << ' ' << d.code;
  if (color) os << "\x1b[0m";
  os << ": " << d.message;
  if (d.subject && !d.location) os << " [" << *d.subject << ']';
  return os.str();
}

// Thrown by model-building operations; carries the diagnostic that explains it.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(Diagnostic d)
      : std::runtime_error(d.code + ": " + d.message), diagnostic_(std::move(d)) {}

  const Diagnostic& diagnostic() const noexcept { return diagnostic_; }
  const std::string& code() const noexcept { return diagnostic_.code; }

 private:
  Diagnostic diagnostic_;
};

}  // namespace dsalign
