#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "annbench/protocol.hpp"
#include "annbench/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

// Runs the CLI with stderr discarded and returns its exit status and stdout.
Run run(const std::string& args) {
  const std::string cmd = std::string("\"") + ANNBENCH_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("annbench_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(Cli, GenIsDeterministic) {
  ASSERT_EQ(run("gen --classes 2 --per-class 3 --dim 4 --seed 42 --out " + path("a.vemb")).status, 0);
  ASSERT_EQ(run("gen --classes 2 --per-class 3 --dim 4 --seed 42 --out " + path("b.vemb")).status, 0);
  const auto a = slurp(path("a.vemb"));
  EXPECT_EQ(a.size(), 4 + 1 + 4 + 8 + 6 * (8 + 4 + 4 * 4));
  EXPECT_EQ(a, slurp(path("b.vemb")));
  ASSERT_EQ(run("gen --classes 2 --per-class 3 --dim 4 --seed 43 --out " + path("c.vemb")).status, 0);
  EXPECT_NE(a, slurp(path("c.vemb")));
}

TEST_F(Cli, FlatBenchHasPerfectRecall) {
  ASSERT_EQ(run("gen --classes 3 --per-class 20 --dim 8 --out " + path("d.vemb")).status, 0);
  ASSERT_EQ(run("bench " + path("d.vemb") + " --family flat-l2 --out " + path("r.json")).status, 0);
  const auto reports = annbench::read_report(path("r.json"), annbench::ReportFormat::Json);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].family, "flat-l2");
  EXPECT_EQ(reports[0].recall_at_5, 1.0);
  EXPECT_EQ(reports[0].n_queries, 60u);
}

TEST_F(Cli, SearchAgreesWithTruth) {
  ASSERT_EQ(run("gen --classes 3 --per-class 10 --dim 6 --spread 0.3 --out " + path("d.vemb")).status, 0);
  ASSERT_EQ(run("build " + path("d.vemb") + " --family flat-l2 --out " + path("i.vidx")).status, 0);
  const auto truth = run("truth " + path("d.vemb") + " --k 1");
  ASSERT_EQ(truth.status, 0);
  std::istringstream lines(truth.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "query_id,rank,neighbor_id");
  int checked = 0;
  while (std::getline(lines, line)) {
    const auto c1 = line.find(','), c2 = line.rfind(',');
    const std::string query = line.substr(0, c1), neighbor = line.substr(c2 + 1);
    const auto found = run("search " + path("i.vidx") + " --id " + query + " --k 1");
    ASSERT_EQ(found.status, 0);
    std::istringstream rows(found.out);
    std::string header, row;
    std::getline(rows, header);
    std::getline(rows, row);
    EXPECT_EQ(header, "rank,id,score");
    EXPECT_EQ(row.substr(0, row.rfind(',')), "1," + neighbor) << "query " << query;
    ++checked;
  }
  EXPECT_EQ(checked, 30);
}

TEST_F(Cli, RejectsUnknownInput) {
  EXPECT_NE(run("").status, 0);
  EXPECT_NE(run("frobnicate").status, 0);
  EXPECT_NE(run("gen --bogus 1 --out " + path("x.vemb")).status, 0);
  EXPECT_NE(run("bench " + path("missing.vemb") + " --family flat-l2").status, 0);
  ASSERT_EQ(run("gen --classes 2 --per-class 3 --dim 4 --out " + path("d.vemb")).status, 0);
  EXPECT_NE(run("bench " + path("d.vemb") + " --family nope").status, 0);
  EXPECT_NE(run("bench " + path("d.vemb") + " --family flat-l2 --queries 7").status, 0);
}

TEST_F(Cli, SeededBenchIsReproducible) {
  ASSERT_EQ(run("gen --classes 4 --per-class 80 --dim 16 --out " + path("d.vemb")).status, 0);
  const std::string bench = "bench " + path("d.vemb") + " --family flat-l2,pq,ivf-sq,lsh,hnsw,annoy-angular --seed 3";
  ASSERT_EQ(run(bench + " --out " + path("a.json")).status, 0);
  ASSERT_EQ(run(bench + " --out " + path("b.json")).status, 0);
  const auto a = annbench::read_report(path("a.json"), annbench::ReportFormat::Json);
  const auto b = annbench::read_report(path("b.json"), annbench::ReportFormat::Json);
  ASSERT_EQ(a.size(), 6u);
  ASSERT_EQ(b.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(annbench::same_except_timing(a[i], b[i])) << a[i].family;
    for (const auto* r : {&a[i], &b[i]}) {
      ASSERT_GT(r->avg_query_time_us, 0.0);
      EXPECT_NEAR(r->qps, 1e6 / r->avg_query_time_us, 0.01 * r->qps) << r->family;
    }
  }
}

TEST_F(Cli, CsvOutput) {
  ASSERT_EQ(run("gen --classes 2 --per-class 10 --dim 4 --out " + path("d.csv")).status, 0);
  const auto csv = slurp(path("d.csv"));
  EXPECT_EQ(csv.rfind("id,label,f0,f1,f2,f3\n", 0), 0u);
  const auto out = run("bench " + path("d.csv") + " --family flat-l2 --format csv");
  ASSERT_EQ(out.status, 0);
  EXPECT_EQ(out.out.rfind("family,", 0), 0u);
}

}  // namespace
