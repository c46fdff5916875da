#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "dsalign/diagnostic.hpp"
#include "dsalign/model.hpp"
#include "dsalign/validate.hpp"

namespace dsalign::exporter {

enum class Format { OpenExchange, Dot };

inline std::optional<Format> parse_format(std::string_view s) {
  if (s == "open_exchange") return Format::OpenExchange;
  if (s == "dot") return Format::Dot;
  return std::nullopt;
}

struct ExportOptions {
  Format format = Format::OpenExchange;
  bool include_derived = true;
  bool deterministic_ids = true;
};

// Lower-snake slug of a display name: "FAQ Chatbot" -> "faq_chatbot".
inline std::string slugify(std::string_view name) {
  std::string out;
  bool pending_sep = false;
  for (unsigned char c : name) {
    if (std::isalnum(c) && c < 0x80) {
      if (pending_sep && !out.empty()) out += '_';
      pending_sep = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending_sep = true;
    }
  }
  return out.empty() ? "system" : out;
}

inline bool exported(const Element& e, const ExportOptions& opts) {
  return opts.include_derived || !is_motivation_kind(e.kind);
}

inline bool exported(const AlignmentModel& m, const Relation& r, const ExportOptions& opts) {
  if (opts.include_derived) return true;
  return exported(*m.find(r.source), opts) && exported(*m.find(r.target), opts);
}

inline void require_exportable(const AlignmentModel& model) {
  for (const auto& d : validate(model)) {
    if (d.is_error()) {
      throw ModelError(make_error("E300",
                                  "export refused: model has validation errors (first: " + d.code +
                                      " " + d.message + ")",
                                  d.subject));
    }
  }
}

}  // namespace dsalign::exporter
