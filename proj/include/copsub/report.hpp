#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "copsub/harness.hpp"
#include "copsub/sample.hpp"

namespace copsub {

/// n rows x d numeric columns (RFC 4180 quoting accepted). Throws ParseError
/// with the 1-based file row and column of the offending cell.
Sample parse_csv(std::istream& in, bool header = false);
Sample ingest_csv(const std::filesystem::path& path, bool header = false);

/// Writes the sample with round-trip precision.
void write_csv(const Sample& sample, const std::filesystem::path& path);

/// The table as long-format CSV: method,point,statistic,value.
std::string table_csv(const ReportTable& table);

/// Writes <dir>/<table>.csv for every table and <dir>/manifest.json (config
/// echo, tables, runtime, version). Creates dir if needed.
void emit_report(const ExperimentReport& report, const std::filesystem::path& dir);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace copsub
