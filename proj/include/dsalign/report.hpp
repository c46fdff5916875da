#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsalign/derivation.hpp"
#include "dsalign/diagnostic.hpp"
#include "dsalign/taxonomy.hpp"

namespace dsalign::report {

enum class TableFormat { Markdown, Csv };

inline std::optional<TableFormat> parse_table_format(std::string_view s) {
  if (s == "markdown") return TableFormat::Markdown;
  if (s == "csv") return TableFormat::Csv;
  return std::nullopt;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// One row per item: id, category path, description, sources, severity, rule.
inline std::string item_table(const EvaluationItemSet& set, TableFormat format) {
  std::string out;
  if (format == TableFormat::Csv) {
    out += "id,category,description,sources,severity,rule\n";
    for (const auto& it : set.items) {
      out += csv_field(it.id) + "," + std::string(category_path(it.category)) + "," +
             csv_field(it.description) + "," + csv_field(join(it.sources, ";")) + "," +
             (it.severity ? std::string(to_string(*it.severity)) : "") + "," +
             std::string(to_string(it.rule)) + "\n";
    }
    return out;
  }
  out += "| id | category | description | sources | severity | rule |\n";
  out += "| --- | --- | --- | --- | --- | --- |\n";
  for (const auto& it : set.items) {
    out += "| " + it.id + " | " + std::string(category_path(it.category)) + " | " +
           md_cell(it.description) + " | " + md_cell(join(it.sources, ", ")) + " | " +
           (it.severity ? std::string(to_string(*it.severity)) : "") + " | " +
           std::string(to_string(it.rule)) + " |\n";
  }
  return out;
}

// Leaves x systems. Rows are always all 19 leaves in taxonomy order.
struct Matrix {
  std::vector<Leaf> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<std::vector<std::string>>> cells;  // [row][column] -> descriptions
  std::vector<Leaf> common_rows;                             // non-empty in every column
};

// Throws ModelError E401 for no itemsets, E400 for duplicate system names.
inline Matrix build_matrix(std::span<const EvaluationItemSet> sets) {
  if (sets.empty()) throw ModelError(make_error("E401", "a comparison needs at least one itemset"));
  Matrix m;
  std::set<std::string> seen;
  for (const auto& s : sets) {
    if (!seen.insert(s.system_name).second) {
      throw ModelError(make_error("E400", "system '" + s.system_name + "' appears more than once",
                                  s.system_name));
    }
    m.columns.push_back(s.system_name);
  }
  for (Leaf leaf : all_leaves()) m.rows.push_back(leaf);
  m.cells.assign(m.rows.size(), std::vector<std::vector<std::string>>(sets.size()));
  for (std::size_t col = 0; col < sets.size(); ++col) {
    for (const auto& it : sets[col].items) {
      m.cells[static_cast<std::size_t>(it.category)][col].push_back(it.description);
    }
  }
  for (std::size_t row = 0; row < m.rows.size(); ++row) {
    bool everywhere = true;
    for (const auto& cell : m.cells[row]) everywhere = everywhere && !cell.empty();
    if (everywhere) m.common_rows.push_back(m.rows[row]);
  }
  return m;
}

// Markdown: a "Common to all systems" list followed by the leaf x system grid.
// CSV: one row per leaf with a common_to_all_systems flag column first.
inline std::string render_matrix(const Matrix& m, TableFormat format) {
  std::string out;
  if (format == TableFormat::Csv) {
    out += "category,common_to_all_systems";
    for (const auto& c : m.columns) out += "," + csv_field(c);
    out += "\n";
    for (std::size_t row = 0; row < m.rows.size(); ++row) {
      bool common = std::find(m.common_rows.begin(), m.common_rows.end(), m.rows[row]) !=
                    m.common_rows.end();
      out += std::string(category_path(m.rows[row])) + (common ? ",yes" : ",no");
      for (const auto& cell : m.cells[row]) out += "," + csv_field(join(cell, "\n"));
      out += "\n";
    }
    return out;
  }
  out += "# Evaluation items by system\n\n## Common to all systems\n\n";
  if (m.common_rows.empty()) out += "_none_\n";
  for (Leaf leaf : m.common_rows) out += "- " + std::string(category_path(leaf)) + "\n";
  out += "\n## Items by category\n\n| category |";
  for (const auto& c : m.columns) out += " " + md_cell(c) + " |";
  out += "\n| --- |";
  for (std::size_t i = 0; i < m.columns.size(); ++i) out += " --- |";
  out += "\n";
  for (std::size_t row = 0; row < m.rows.size(); ++row) {
    out += "| " + std::string(category_path(m.rows[row])) + " |";
    for (const auto& cell : m.cells[row]) {
      std::vector<std::string> escaped;
      for (const auto& d : cell) escaped.push_back(md_cell(d));
      out += " " + join(escaped, "<br>") + " |";
    }
    out += "\n";
  }
  return out;
}

inline std::string matrix(std::span<const EvaluationItemSet> sets, TableFormat format) {
  return render_matrix(build_matrix(sets), format);
}

}  // namespace dsalign::report
