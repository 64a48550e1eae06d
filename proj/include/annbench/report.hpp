#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "annbench/protocol.hpp"

namespace annbench {

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(std::string_view name);

/// Columns follow the comparison table (family, memory, precision, recall, F1,
/// recall@5, index size, indexing time, average query time), then the extras.
std::vector<std::string> report_columns();

/// Throws on an empty list.
std::string format_reports(const std::vector<BenchReport>& reports, ReportFormat format);
std::vector<BenchReport> parse_reports(std::string_view text, ReportFormat format);

/// Throws on an empty list or an unwritable path.
void write_report(const std::vector<BenchReport>& reports, const std::filesystem::path& path, ReportFormat format);
std::vector<BenchReport> read_report(const std::filesystem::path& path, ReportFormat format);

}  // namespace annbench
