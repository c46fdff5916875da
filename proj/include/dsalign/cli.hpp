#pragma once

#include <algorithm>
#include <fstream>
#include <future>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dsalign/derivation.hpp"
#include "dsalign/diagnostic.hpp"
#include "dsalign/dsl/format.hpp"
#include "dsalign/dsl/parse.hpp"
#include "dsalign/export.hpp"
#include "dsalign/itemset_io.hpp"
#include "dsalign/report.hpp"
#include "dsalign/validate.hpp"

namespace dsalign::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDiagnostics = 1;
inline constexpr int kUsage = 2;
inline constexpr int kIo = 3;

struct Streams {
  std::ostream& out;
  std::ostream& err;
  bool color = false;
};

namespace detail {

inline void print(const Streams& s, const std::vector<Diagnostic>& diags, const std::string& file) {
  for (const auto& d : diags) s.err << render(d, file, s.color) << '\n';
}

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline bool write_output(const Streams& s, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    s.out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    s.err << render(make_error("E190", "cannot write file '" + path + "'"), path, s.color) << '\n';
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

// A parsed file, or the exit code explaining why there is none.
struct Loaded {
  std::string path;
  std::optional<AlignmentModel> model;
  std::vector<Diagnostic> diagnostics;
  int code = kOk;
};

inline Loaded load(const std::string& path) {
  Loaded l{path, std::nullopt, {}, kOk};
  auto result = dsl::load_file(path);
  l.diagnostics = std::move(result.diagnostics);
  l.model = std::move(result.model);
  if (!l.model) {
    bool io = std::any_of(l.diagnostics.begin(), l.diagnostics.end(),
                          [](const Diagnostic& d) { return d.code == "E190"; });
    l.code = io ? kIo : kDiagnostics;
  }
  return l;
}

struct Derived {
  Loaded loaded;
  std::optional<EvaluationItemSet> items;
};

inline Derived load_and_derive(const std::string& path) {
  Derived d{load(path), std::nullopt};
  if (!d.loaded.model) return d;
  auto diags = validate(*d.loaded.model);
  if (has_errors(diags)) {
    for (auto& x : diags) d.loaded.diagnostics.push_back(std::move(x));
    d.loaded.code = kDiagnostics;
    return d;
  }
  d.items = derive_all(*d.loaded.model);
  for (const auto& w : d.items->warnings) d.loaded.diagnostics.push_back(w);
  return d;
}

inline int worst(int a, int b) { return std::max(a, b); }

inline int strict_code(bool strict, const std::vector<Diagnostic>& diags) {
  if (has_errors(diags)) return kDiagnostics;
  if (strict && !diags.empty()) return kDiagnostics;
  return kOk;
}

}  // namespace detail

struct CheckOptions {
  std::vector<std::string> inputs;
  bool strict = false;
};

inline int check(const CheckOptions& o, const Streams& s) {
  int code = kOk;
  for (const auto& path : o.inputs) {
    auto l = detail::load(path);
    if (l.model) {
      for (auto& d : validate(*l.model)) l.diagnostics.push_back(std::move(d));
    }
    detail::print(s, l.diagnostics, path);
    int file_code = l.model ? detail::strict_code(o.strict, l.diagnostics) : l.code;
    code = detail::worst(code, file_code);
    if (file_code == kOk) {
      s.out << path << ": ok";
      if (!l.diagnostics.empty()) s.out << " (" << l.diagnostics.size() << " warnings)";
      s.out << '\n';
    }
  }
  return code;
}

struct DeriveOptions {
  std::string input;
  std::string items_path;
  bool strict = false;
};

inline int derive(const DeriveOptions& o, const Streams& s) {
  auto d = detail::load_and_derive(o.input);
  detail::print(s, d.loaded.diagnostics, o.input);
  if (!d.items) return d.loaded.code;
  if (!o.items_path.empty()) {
    if (!detail::write_output(s, o.items_path, serialize(*d.items))) return kIo;
  }
  // The summary shares stdout with `--items -`; keep it off stdout then.
  (o.items_path == "-" ? s.err : s.out) << summary(*d.items) << '\n';
  return detail::strict_code(o.strict, d.loaded.diagnostics);
}

struct ExportCommandOptions {
  std::string input;
  std::string format = "open_exchange";
  std::string out_path;
  bool no_derived = false;
};

inline int export_command(const ExportCommandOptions& o, const Streams& s) {
  auto format = exporter::parse_format(o.format);
  if (!format) {
    s.err << "unknown export format '" << o.format << "' (expected open_exchange or dot)\n";
    return kUsage;
  }
  auto d = detail::load_and_derive(o.input);
  detail::print(s, d.loaded.diagnostics, o.input);
  if (!d.items) return d.loaded.code;
  std::string text;
  try {
    auto attached = attach(*d.loaded.model, *d.items);
    text = exporter::export_model(attached,
                                  exporter::ExportOptions{*format, !o.no_derived, true});
  } catch (const ModelError& e) {
    detail::print(s, {e.diagnostic()}, o.input);
    return kDiagnostics;
  }
  return detail::write_output(s, o.out_path, text) ? kOk : kIo;
}

struct ReportOptions {
  std::vector<std::string> inputs;
  bool matrix = false;
  std::string format = "markdown";
  std::string out_path;
};

inline int report_command(const ReportOptions& o, const Streams& s) {
  auto format = report::parse_table_format(o.format);
  if (!format) {
    s.err << "unknown report format '" << o.format << "' (expected markdown or csv)\n";
    return kUsage;
  }
  // Derive in parallel; results are merged in argument order.
  std::vector<std::future<detail::Derived>> jobs;
  for (const auto& path : o.inputs) {
    jobs.push_back(std::async(std::launch::async, detail::load_and_derive, path));
  }
  std::vector<EvaluationItemSet> sets;
  int code = kOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto d = jobs[i].get();
    detail::print(s, d.loaded.diagnostics, o.inputs[i]);
    if (!d.items) {
      code = detail::worst(code, d.loaded.code);
      continue;
    }
    sets.push_back(std::move(*d.items));
  }
  if (code != kOk) return code;

  std::string text;
  if (o.matrix) {
    try {
      text = report::matrix(sets, *format);
    } catch (const ModelError& e) {
      detail::print(s, {e.diagnostic()}, "");
      return kDiagnostics;
    }
  } else {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (i) text += "\n";
      if (*format == report::TableFormat::Markdown) text += "## " + sets[i].system_name + "\n\n";
      text += report::item_table(sets[i], *format);
    }
  }
  return detail::write_output(s, o.out_path, text) ? kOk : kIo;
}

struct FmtOptions {
  std::vector<std::string> inputs;
  bool write = false;
  bool check = false;
};

inline int fmt(const FmtOptions& o, const Streams& s) {
  int code = kOk;
  for (const auto& path : o.inputs) {
    auto l = detail::load(path);
    detail::print(s, l.diagnostics, path);
    if (!l.model) {
      code = detail::worst(code, l.code);
      continue;
    }
    std::string canonical;
    try {
      canonical = dsl::format(*l.model);
    } catch (const ModelError& e) {
      detail::print(s, {e.diagnostic()}, path);
      code = detail::worst(code, kDiagnostics);
      continue;
    }
    if (o.check || o.write) {
      auto original = detail::read_file(path);
      if (!original) {
        code = detail::worst(code, kIo);
        continue;
      }
      bool canonical_already = *original == canonical;
      if (o.check && !canonical_already) {
        s.err << path << ": not in canonical form\n";
        code = detail::worst(code, kDiagnostics);
      }
      if (o.write && !canonical_already) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!(f << canonical)) code = detail::worst(code, kIo);
      }
    } else {
      s.out << canonical;
    }
  }
  return code;
}

// Entry point. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               bool color = false) {
  Streams s{out, err, color};
  CLI::App app{"dsalign: business / dialogue-system alignment models", "dsalign"};
  app.require_subcommand(1);

  CheckOptions check_o;
  auto* check_cmd = app.add_subcommand("check", "Parse and validate models");
  check_cmd->add_option("inputs", check_o.inputs, ".dsa files")->required();
  check_cmd->add_flag("--strict", check_o.strict, "Treat warnings as errors");

  DeriveOptions derive_o;
  auto* derive_cmd = app.add_subcommand("derive", "Derive evaluation items");
  derive_cmd->add_option("input", derive_o.input, ".dsa file")->required();
  derive_cmd->add_option("--items", derive_o.items_path, "Write the itemset document here (- for stdout)");
  derive_cmd->add_flag("--strict", derive_o.strict, "Treat warnings as errors");

  ExportCommandOptions export_o;
  auto* export_cmd = app.add_subcommand("export", "Derive, attach and export a model");
  export_cmd->add_option("input", export_o.input, ".dsa file")->required();
  export_cmd->add_option("--format", export_o.format, "open_exchange or dot");
  export_cmd->add_option("--out", export_o.out_path, "Output path (default stdout)");
  export_cmd->add_flag("--no-derived", export_o.no_derived, "Omit derived value/risk/cost elements");

  ReportOptions report_o;
  auto* report_cmd = app.add_subcommand("report", "Render item tables or a comparison matrix");
  report_cmd->add_option("inputs", report_o.inputs, ".dsa files")->required();
  report_cmd->add_flag("--matrix", report_o.matrix, "Render a leaf x system matrix");
  report_cmd->add_option("--format", report_o.format, "markdown or csv");
  report_cmd->add_option("--out", report_o.out_path, "Output path (default stdout)");

  FmtOptions fmt_o;
  auto* fmt_cmd = app.add_subcommand("fmt", "Print or rewrite models in canonical form");
  fmt_cmd->add_option("inputs", fmt_o.inputs, ".dsa files")->required();
  fmt_cmd->add_flag("--write", fmt_o.write, "Rewrite files in place");
  fmt_cmd->add_flag("--check", fmt_o.check, "Exit 1 if a file is not canonical");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  if (*check_cmd) return check(check_o, s);
  if (*derive_cmd) return derive(derive_o, s);
  if (*export_cmd) return export_command(export_o, s);
  if (*report_cmd) return report_command(report_o, s);
  return fmt(fmt_o, s);
}

}  // namespace dsalign::cli
