#include "copsub/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "copsub/errors.hpp"

namespace copsub {

namespace {

// Splits one record; `row` is used for error positions only.
std::vector<std::string> split_record(const std::string& line, std::size_t row) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          cur += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quoted cell", row, cells.size() + 1);
  cells.push_back(std::move(cur));
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Sample parse_csv(std::istream& in, bool header) {
  std::vector<double> values;
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t row = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header && row == 1) continue;
    if (trim(line).empty()) continue;
    const auto cells = split_record(line, row);
    if (d == 0) {
      d = cells.size();
    } else if (cells.size() != d) {
      throw ParseError("expected " + std::to_string(d) + " cells, found " +
                           std::to_string(cells.size()),
                       row, std::min(cells.size(), d) + 1);
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string cell = trim(cells[j]);
      double v = 0.0;
      const char* first = cell.data();
      const char* last = first + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc() || ptr != last) {
        throw ParseError("non-numeric cell '" + cell + "'", row, j + 1);
      }
      if (!std::isfinite(v)) throw ParseError("non-finite cell '" + cell + "'", row, j + 1);
      values.push_back(v);
    }
    ++n;
  }
  if (n == 0) throw EmptyInput("CSV contains no data rows");
  if (d < 2) throw ParseError("need at least two columns", 1, 1);
  return Sample(n, d, std::move(values));
}

Sample ingest_csv(const std::filesystem::path& path, bool header) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return parse_csv(in, header);
}

void write_csv(const Sample& sample, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < sample.n(); ++i) {
    for (std::size_t j = 0; j < sample.d(); ++j) out << (j ? "," : "") << number(sample(i, j));
    out << "\r\n";
  }
}

std::string table_csv(const ReportTable& table) {
  std::ostringstream out;
  out << "method,point,statistic,value\r\n";
  for (const auto& r : table.rows) {
    out << quote(r.method) << ',' << quote(r.point) << ',' << quote(r.statistic) << ','
        << number(r.value) << "\r\n";
  }
  return out.str();
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["tool"] = "copsub";
  manifest["version"] = kVersion;
  manifest["runtime_seconds"] = report.runtime_seconds;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  manifest["config"] = config;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& table : report.tables) {
    const auto file = table.name + ".csv";
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + (dir / file).string() + "'");
    out << table_csv(table);
    files.push_back({{"table", table.name}, {"file", file}, {"rows", table.rows.size()}});
  }
  manifest["tables"] = files;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw InvalidArgument("cannot write manifest");
  out << manifest.dump(2) << '\n';
}

}  // namespace copsub
