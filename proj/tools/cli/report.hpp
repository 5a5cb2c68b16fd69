#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace possib::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument on a width mismatch or a non-finite number.
  void add_row(std::vector<Cell> row);
};

/// Verdict values are one of "holds", "fails", "undecided".
struct VerdictEntry {
  std::string name;
  std::string value;
  std::string detail;
};

struct ReportDocument {
  std::string tool = "possib";
  std::string version;
  std::vector<std::string> command;
  std::string scenario_digest;
  std::optional<std::string> timestamp;
  std::vector<Table> tables;
  std::vector<VerdictEntry> verdicts;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;

  Table& table(std::string name, std::vector<std::string> columns);
  void verdict(std::string name, std::string value, std::string detail = {});
};

enum class Format { kTable, kJson, kCsv };

std::string render(const ReportDocument& doc, Format format, std::size_t stride = 1);
std::string render_json(const ReportDocument& doc);
std::string render_csv(const ReportDocument& doc);
/// Aligned text. With stride > 1 only every stride-th row (and the last) of
/// each table is printed.
std::string render_table(const ReportDocument& doc, std::size_t stride = 1);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace possib::cli
