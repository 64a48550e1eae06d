// annbench: generate embeddings, build/search indexes, compute ground truth and
// run the retrieval benchmark.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "annbench/error.hpp"
#include "annbench/exact_search.hpp"
#include "annbench/protocol.hpp"
#include "annbench/registry.hpp"
#include "annbench/report.hpp"

namespace {

using namespace annbench;

struct GlobalOptions {
  std::uint64_t seed = 42;
  std::string metric;
  std::size_t k = 6;
  std::optional<std::size_t> queries;
  std::string out;
  std::string format = "json";
};

struct FamilyOptions {
  std::optional<std::size_t> nlist, nprobe, pq_m, pq_nbits, lsh_nbits, hnsw_m, ef_construction, ef_search, trees,
      leaf_size, search_k;
  std::optional<std::string> rerank, selection;
};

void add_family_options(CLI::App* cmd, FamilyOptions& f) {
  cmd->add_option("--nlist", f.nlist, "IVF coarse centroid count (default round(sqrt(N)))");
  cmd->add_option("--nprobe", f.nprobe, "IVF lists probed per query (default nlist/8)");
  cmd->add_option("--pq-m", f.pq_m, "PQ subquantizer count (default largest divisor of dim <= 8)");
  cmd->add_option("--pq-nbits", f.pq_nbits, "PQ bits per sub-code (default 8)");
  cmd->add_option("--lsh-nbits", f.lsh_nbits, "LSH code length (default 128)");
  cmd->add_option("--rerank", f.rerank, "LSH exact re-ranking: on|off (default on)")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--hnsw-m", f.hnsw_m, "HNSW connectivity M (default 32)");
  cmd->add_option("--ef-construction", f.ef_construction, "HNSW build pool (default 40)");
  cmd->add_option("--ef-search", f.ef_search, "HNSW search pool (default 64)");
  cmd->add_option("--selection", f.selection, "HNSW neighbor selection: heuristic|simple")
      ->check(CLI::IsMember({"heuristic", "simple"}));
  cmd->add_option("--trees", f.trees, "RP-forest tree count (default 10)");
  cmd->add_option("--leaf-size", f.leaf_size, "RP-forest leaf size (default 16)");
  cmd->add_option("--search-k", f.search_k, "RP-forest candidate budget (default trees*k)");
}

NamedFamily resolve_family(const std::string& name, const FamilyOptions& f, const std::string& metric) {
  NamedFamily fam = family_defaults(name == "rp-forest" ? "annoy-angular" : name);
  if (name == "rp-forest") fam.name = "rp-forest";
  std::visit(
      [&](auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PqParams>) {
          if (f.pq_m) p.m = *f.pq_m;
          if (f.pq_nbits) p.nbits = *f.pq_nbits;
        } else if constexpr (std::is_same_v<P, IvfParams>) {
          if (f.nlist) p.nlist = *f.nlist;
          if (f.nprobe) p.nprobe = *f.nprobe;
          if (f.pq_m) p.pq.m = *f.pq_m;
          if (f.pq_nbits) p.pq.nbits = *f.pq_nbits;
        } else if constexpr (std::is_same_v<P, LshParams>) {
          if (f.lsh_nbits) p.nbits = *f.lsh_nbits;
          if (f.rerank) p.rerank = *f.rerank == "on";
        } else if constexpr (std::is_same_v<P, HnswParams>) {
          if (f.hnsw_m) p.M = *f.hnsw_m;
          if (f.ef_construction) p.ef_construction = *f.ef_construction;
          if (f.ef_search) p.ef_search = *f.ef_search;
          if (f.selection) p.selection = *f.selection == "simple" ? NeighborSelection::Simple : NeighborSelection::Heuristic;
        } else if constexpr (std::is_same_v<P, RpParams>) {
          if (f.trees) p.n_trees = *f.trees;
          if (f.leaf_size) p.leaf_size = *f.leaf_size;
          if (f.search_k) p.search_k = *f.search_k;
          if (name == "rp-forest" && !metric.empty()) p.metric = parse_metric(metric);
        }
      },
      fam.params);
  return fam;
}

EmbeddingSet load_embeddings(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  ANNBENCH_CHECK(probe, "cannot open " + path);
  char magic[4] = {};
  probe.read(magic, 4);
  if (probe.gcount() == 4 && std::string(magic, 4) == "VEMB") return read_vemb(path);
  return read_csv(path);
}

std::vector<float> parse_vector(const std::string& text) {
  std::vector<float> v;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      v.push_back(std::stof(cell));
    } catch (const std::logic_error&) {
      throw Error("malformed vector component: " + cell);
    }
  }
  ANNBENCH_CHECK(!v.empty(), "empty query vector");
  return v;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  ANNBENCH_CHECK(file, "cannot write " + out);
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate nearest neighbor index library and retrieval benchmark"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for generation, index builds and query sampling");
  app.add_option("--metric", g.metric, "euclidean|ip|angular|manhattan");
  app.add_option("--k", g.k, "Neighbors per query");
  app.add_option("--queries", g.queries, "Number of sampled queries (default min(1000, N))");
  app.add_option("--out", g.out, "Output path ('-' or empty for stdout where applicable)");
  app.add_option("--format", g.format, "Report format: json|csv")->check(CLI::IsMember({"json", "csv"}));

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic labeled embedding set (VEMB, or CSV for *.csv)");
  std::size_t classes = 32, per_class = 300, dim = 64;
  double spread = 0.05;
  gen->add_option("--classes", classes, "Number of classes");
  gen->add_option("--per-class", per_class, "Points per class");
  gen->add_option("--dim", dim, "Dimension");
  gen->add_option("--spread", spread, "Gaussian standard deviation around each class centroid");

  // build
  auto* build = app.add_subcommand("build", "Build an index over an embedding file and write it as VIDX");
  std::string build_input, family_name_opt;
  FamilyOptions fam_opts;
  build->add_option("input", build_input, "VEMB or CSV embedding file")->required();
  build->add_option("--family", family_name_opt, "Index family")->required();
  add_family_options(build, fam_opts);

  // search
  auto* search = app.add_subcommand("search", "Query a VIDX index by stored id or raw vector");
  std::string search_index, search_data, search_vector;
  std::optional<Id> search_id;
  bool include_self = false;
  search->add_option("index", search_index, "VIDX file")->required();
  auto* id_opt = search->add_option("--id", search_id, "Query with the vector of this stored id (excluded from results)");
  auto* vec_opt = search->add_option("--vector", search_vector, "Comma-separated query vector");
  id_opt->excludes(vec_opt);
  search->add_option("--data", search_data, "Embedding file to look up --id (needed for compressed families)");
  search->add_flag("--include-self", include_self, "Do not exclude the --id record from its own results");

  // truth
  auto* truth = app.add_subcommand("truth", "Exact ground-truth neighbors for sampled queries (CSV)");
  std::string truth_input;
  truth->add_option("input", truth_input, "VEMB or CSV embedding file")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Run the retrieval benchmark over one or more families");
  std::string bench_input;
  std::vector<std::string> families;
  std::size_t recall_n = 5;
  std::vector<std::size_t> k_sweep;
  bench->add_option("input", bench_input, "VEMB or CSV embedding file")->required();
  bench->add_option("--family", families, "Families (comma-separated) or 'all'")->delimiter(',')->required();
  bench->add_option("--recall-n", recall_n, "True-neighbor set size for recall@n");
  bench->add_option("--k-sweep", k_sweep, "Run once per k (comma-separated), one report row each")->delimiter(',');
  add_family_options(bench, fam_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) {
      ANNBENCH_CHECK(!g.out.empty() && g.out != "-", "gen: --out is required");
      const auto set = gen_synthetic(classes, per_class, dim, spread, g.seed);
      if (g.out.size() >= 4 && g.out.substr(g.out.size() - 4) == ".csv")
        write_csv(set, g.out);
      else
        write_vemb(set, g.out);
      std::cerr << "wrote " << set.size() << " records of dim " << set.dim() << " to " << g.out << '\n';
    } else if (build->parsed()) {
      ANNBENCH_CHECK(!g.out.empty() && g.out != "-", "build: --out is required");
      auto set = load_embeddings(build_input);
      const auto fam = resolve_family(family_name_opt, fam_opts, g.metric);
      if (std::holds_alternative<FlatIpParams>(fam.params)) set = set.normalized();
      const auto index = build_index(set, fam.params, g.seed);
      save_index_file(*index, g.out);
      std::cerr << "built " << fam.name << " (" << index->describe() << ") over " << set.size() << " records\n";
    } else if (search->parsed()) {
      const auto index = load_index_file(search_index);
      std::vector<float> query;
      std::optional<Id> exclude;
      if (search_id) {
        if (!search_data.empty()) {
          const auto set = load_embeddings(search_data);
          const auto v = set.vector(set.row_of(*search_id));
          query.assign(v.begin(), v.end());
        } else {
          auto stored = index->stored_vector(*search_id);
          ANNBENCH_CHECK(stored.has_value(), "search: index keeps no raw vector for id " + std::to_string(*search_id) +
                                                 "; pass --data");
          query = std::move(*stored);
        }
        if (index->family() == Family::FlatIP) query = normalize(query);
        if (!include_self) exclude = *search_id;
      } else {
        ANNBENCH_CHECK(!search_vector.empty(), "search: give --id or --vector");
        query = parse_vector(search_vector);
      }
      const auto result = index->search(query, g.k, exclude);
      std::ostringstream out;
      out << "rank,id,score\n";
      char score[32];
      for (std::size_t i = 0; i < result.size(); ++i) {
        std::snprintf(score, sizeof(score), "%.9g", static_cast<double>(result.neighbors[i].score));
        out << i + 1 << ',' << result.neighbors[i].id << ',' << score << '\n';
      }
      emit(out.str(), g.out);
    } else if (truth->parsed()) {
      const auto set = load_embeddings(truth_input);
      const Metric metric = g.metric.empty() ? Metric::L2 : parse_metric(g.metric);
      const std::size_t nq = g.queries.value_or(set.size());
      const auto queries = sample_queries(set, nq, g.seed);
      const auto gt = ground_truth(set, queries, g.k, metric);
      std::ostringstream out;
      out << "query_id,rank,neighbor_id\n";
      for (Id q : queries) {
        const auto& ids = gt.at(q);
        for (std::size_t i = 0; i < ids.size(); ++i) out << q << ',' << i + 1 << ',' << ids[i] << '\n';
      }
      emit(out.str(), g.out);
    } else if (bench->parsed()) {
      const auto set = load_embeddings(bench_input);
      if (families.size() == 1 && families[0] == "all") families = benchmark_families();
      if (k_sweep.empty()) k_sweep.push_back(g.k);
      std::vector<BenchReport> reports;
      for (const auto& name : families) {
        const auto fam = resolve_family(name, fam_opts, g.metric);
        for (std::size_t k : k_sweep) {
          ProtocolConfig config;
          config.n_queries = g.queries.value_or(std::min<std::size_t>(1000, set.size()));
          config.k = k;
          config.recall_n = recall_n;
          config.seed = g.seed;
          reports.push_back(bench_family(set, fam, config, g.seed));
          std::cerr << name << " k=" << k << ": recall@" << recall_n << "=" << reports.back().recall_at_5
                    << " precision=" << reports.back().precision << '\n';
        }
      }
      const auto format = parse_report_format(g.format);
      if (g.out.empty() || g.out == "-")
        std::cout << format_reports(reports, format);
      else
        write_report(reports, g.out, format);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
