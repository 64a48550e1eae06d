#include "annbench/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "annbench/error.hpp"
#include "json.hpp"

namespace annbench {
namespace {

using ordered_json = nlohmann::ordered_json;

// Column name paired with a member pointer; one table drives both formats.
struct TextField {
  const char* name;
  std::string BenchReport::*member;
};
struct CountField {
  const char* name;
  std::uint64_t BenchReport::*member;
};
struct RealField {
  const char* name;
  double BenchReport::*member;
};

constexpr RealField kTableFields[] = {
    {"memory_estimate_mb", &BenchReport::memory_estimate_mb},
    {"precision", &BenchReport::precision},
    {"recall", &BenchReport::recall},
    {"f1", &BenchReport::f1},
    {"recall_at_5", &BenchReport::recall_at_5},
    {"index_size_mb", &BenchReport::index_size_mb},
    {"indexing_time_ms", &BenchReport::indexing_time_ms},
    {"avg_query_time_us", &BenchReport::avg_query_time_us},
};
constexpr RealField kExtraFields[] = {
    {"qps", &BenchReport::qps},
    {"accuracy", &BenchReport::accuracy},
    {"precision_at_k", &BenchReport::precision_at_k},
    {"macro_precision", &BenchReport::macro_precision},
    {"macro_recall", &BenchReport::macro_recall},
    {"macro_f1", &BenchReport::macro_f1},
};
constexpr TextField kEchoText[] = {
    {"params", &BenchReport::params},
    {"metric", &BenchReport::metric},
};
constexpr CountField kEchoCounts[] = {
    {"n_queries", &BenchReport::n_queries},
    {"k", &BenchReport::k},
    {"recall_n", &BenchReport::recall_n},
    {"seed", &BenchReport::seed},
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  return cells;
}

ordered_json to_json(const BenchReport& r) {
  ordered_json j;
  j["family"] = r.family;
  for (const auto& f : kTableFields) j[f.name] = r.*f.member;
  for (const auto& f : kExtraFields) j[f.name] = r.*f.member;
  for (const auto& f : kEchoText) j[f.name] = r.*f.member;
  for (const auto& f : kEchoCounts) j[f.name] = r.*f.member;
  return j;
}

BenchReport from_json(const ordered_json& j) {
  BenchReport r;
  r.family = j.at("family").get<std::string>();
  for (const auto& f : kTableFields) r.*f.member = j.at(f.name).get<double>();
  for (const auto& f : kExtraFields) r.*f.member = j.at(f.name).get<double>();
  for (const auto& f : kEchoText) r.*f.member = j.at(f.name).get<std::string>();
  for (const auto& f : kEchoCounts) r.*f.member = j.at(f.name).get<std::uint64_t>();
  return r;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw Error("unknown report format: " + std::string(name));
}

std::vector<std::string> report_columns() {
  std::vector<std::string> cols{"family"};
  for (const auto& f : kTableFields) cols.emplace_back(f.name);
  for (const auto& f : kExtraFields) cols.emplace_back(f.name);
  for (const auto& f : kEchoText) cols.emplace_back(f.name);
  for (const auto& f : kEchoCounts) cols.emplace_back(f.name);
  return cols;
}

std::string format_reports(const std::vector<BenchReport>& reports, ReportFormat format) {
  ANNBENCH_CHECK(!reports.empty(), "write_report: no reports");
  if (format == ReportFormat::Json) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
  }
  std::ostringstream out;
  const auto cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : reports) {
    out << csv_escape(r.family);
    for (const auto& f : kTableFields) out << ',' << format_double(r.*f.member);
    for (const auto& f : kExtraFields) out << ',' << format_double(r.*f.member);
    for (const auto& f : kEchoText) out << ',' << csv_escape(r.*f.member);
    for (const auto& f : kEchoCounts) out << ',' << r.*f.member;
    out << '\n';
  }
  return out.str();
}

std::vector<BenchReport> parse_reports(std::string_view text, ReportFormat format) {
  std::vector<BenchReport> reports;
  if (format == ReportFormat::Json) {
    ordered_json arr;
    try {
      arr = ordered_json::parse(text);
      for (const auto& j : arr) reports.push_back(from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed report JSON: ") + e.what());
    }
    return reports;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  ANNBENCH_CHECK(static_cast<bool>(std::getline(in, line)), "empty report CSV");
  const auto cols = report_columns();
  ANNBENCH_CHECK(split_csv_line(line) == cols, "report CSV header does not match");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    ANNBENCH_CHECK(cells.size() == cols.size(), "report CSV row has the wrong column count");
    BenchReport r;
    std::size_t c = 0;
    try {
      r.family = cells[c++];
      for (const auto& f : kTableFields) r.*f.member = std::stod(cells[c++]);
      for (const auto& f : kExtraFields) r.*f.member = std::stod(cells[c++]);
      for (const auto& f : kEchoText) r.*f.member = cells[c++];
      for (const auto& f : kEchoCounts) r.*f.member = std::stoull(cells[c++]);
    } catch (const std::logic_error&) {
      throw Error("report CSV: malformed number in column " + cols[c - 1]);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

void write_report(const std::vector<BenchReport>& reports, const std::filesystem::path& path, ReportFormat format) {
  const std::string text = format_reports(reports, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  ANNBENCH_CHECK(out, "cannot write report to " + path.string());
  out << text;
  ANNBENCH_CHECK(out.good(), "failed writing report to " + path.string());
}

std::vector<BenchReport> read_report(const std::filesystem::path& path, ReportFormat format) {
  std::ifstream in(path, std::ios::binary);
  ANNBENCH_CHECK(in, "cannot open report " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_reports(buf.str(), format);
}

}  // namespace annbench
