#include "cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace possib::cli {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("table " + name + ": row width mismatch");
  for (const auto& c : row) {
    if (const auto* d = std::get_if<double>(&c); d && !std::isfinite(*d)) {
      throw std::invalid_argument("table " + name + ": non-finite cell");
    }
  }
  rows.push_back(std::move(row));
}

Table& ReportDocument::table(std::string name, std::vector<std::string> columns) {
  tables.push_back(Table{std::move(name), std::move(columns), {}});
  return tables.back();
}

void ReportDocument::verdict(std::string name, std::string value, std::string detail) {
  if (value != "holds" && value != "fails" && value != "undecided") {
    throw std::invalid_argument("verdict " + name + ": unknown value " + value);
  }
  verdicts.push_back({std::move(name), std::move(value), std::move(detail)});
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string joined(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " " : "") + parts[i];
  return out;
}

template <typename F>
void for_each_shown(const Table& t, std::size_t stride, F&& f) {
  stride = std::max<std::size_t>(stride, 1);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i % stride == 0 || i + 1 == t.rows.size()) f(t.rows[i]);
  }
}

}  // namespace

std::string render_json(const ReportDocument& doc) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["tool"] = doc.tool;
  j["version"] = doc.version;
  j["command"] = doc.command;
  j["scenario_digest"] = doc.scenario_digest;
  if (doc.timestamp) j["timestamp"] = *doc.timestamp;
  auto& verdicts = j["verdicts"] = ordered_json::array();
  for (const auto& v : doc.verdicts) verdicts.push_back({{"name", v.name}, {"value", v.value}, {"detail", v.detail}});
  auto& tables = j["tables"] = ordered_json::array();
  for (const auto& t : doc.tables) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows) {
      ordered_json row = ordered_json::array();
      for (const auto& c : r) std::visit([&](const auto& v) { row.push_back(v); }, c);
      rows.push_back(std::move(row));
    }
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}});
  }
  j["notes"] = doc.notes;
  j["warnings"] = doc.warnings;
  return j.dump(2) + "\n";
}

std::string render_csv(const ReportDocument& doc) {
  std::ostringstream out;
  out << "tool," << csv_field(doc.tool) << "\n";
  out << "version," << csv_field(doc.version) << "\n";
  out << "command," << csv_field(joined(doc.command)) << "\n";
  out << "scenario_digest," << doc.scenario_digest << "\n";
  if (doc.timestamp) out << "timestamp," << *doc.timestamp << "\n";
  for (const auto& v : doc.verdicts) {
    out << "verdict," << csv_field(v.name) << "," << v.value << "," << csv_field(v.detail) << "\n";
  }
  for (const auto& n : doc.notes) out << "note," << csv_field(n) << "\n";
  for (const auto& w : doc.warnings) out << "warning," << csv_field(w) << "\n";
  for (const auto& t : doc.tables) {
    out << "\ntable," << csv_field(t.name) << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
    out << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(r[i]));
      out << "\n";
    }
  }
  return out.str();
}

std::string render_table(const ReportDocument& doc, std::size_t stride) {
  std::ostringstream out;
  out << doc.tool << " " << doc.version << "  " << joined(doc.command) << "\n";
  out << "scenario " << doc.scenario_digest;
  if (doc.timestamp) out << "  at " << *doc.timestamp;
  out << "\n";
  for (const auto& t : doc.tables) {
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
    for_each_shown(t, stride, [&](const auto& r) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], cell_text(r[i]).size());
    });
    auto line = [&](const auto& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string s = cell_text(cells[i]);
        out << (i ? "  " : "  ") << std::string(width[i] - s.size(), ' ') << s;
      }
      out << "\n";
    };
    out << "\n[" << t.name << "]\n";
    std::vector<Cell> header(t.columns.begin(), t.columns.end());
    line(header);
    for_each_shown(t, stride, line);
  }
  if (!doc.verdicts.empty()) out << "\n";
  for (const auto& v : doc.verdicts) {
    out << v.name << ": " << v.value;
    if (!v.detail.empty()) out << "  (" << v.detail << ")";
    out << "\n";
  }
  for (const auto& n : doc.notes) out << "note: " << n << "\n";
  for (const auto& w : doc.warnings) out << "warning: " << w << "\n";
  return out.str();
}

std::string render(const ReportDocument& doc, Format format, std::size_t stride) {
  switch (format) {
    case Format::kJson: return render_json(doc);
    case Format::kCsv: return render_csv(doc);
    case Format::kTable: break;
  }
  return render_table(doc, stride);
}

}  // namespace possib::cli
