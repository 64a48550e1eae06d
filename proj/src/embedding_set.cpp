#include "annbench/embedding_set.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "annbench/binary_io.hpp"
#include "annbench/error.hpp"

namespace annbench {

EmbeddingSet::EmbeddingSet(std::size_t dim) : dim_(dim) {
  ANNBENCH_CHECK(dim > 0, "embedding dimension must be positive");
}

void EmbeddingSet::add(Id id, Label label, std::span<const float> vector) {
  ANNBENCH_CHECK(dim_ > 0, "embedding set has no dimension");
  ANNBENCH_CHECK(vector.size() == dim_, "record " + std::to_string(id) + " has length " +
                                            std::to_string(vector.size()) + ", expected " +
                                            std::to_string(dim_));
  for (float x : vector)
    ANNBENCH_CHECK(std::isfinite(x), "record " + std::to_string(id) + " has a non-finite component");
  const auto [it, inserted] = row_of_.emplace(id, ids_.size());
  ANNBENCH_CHECK(inserted, "duplicate id " + std::to_string(id));
  ids_.push_back(id);
  labels_.push_back(label);
  data_.insert(data_.end(), vector.begin(), vector.end());
}

EmbeddingRecord EmbeddingSet::record(std::size_t row) const {
  const auto v = vector(row);
  return {ids_[row], labels_[row], {v.begin(), v.end()}};
}

std::size_t EmbeddingSet::row_of(Id id) const {
  const auto it = row_of_.find(id);
  if (it == row_of_.end()) throw Error("unknown id " + std::to_string(id));
  return it->second;
}

EmbeddingSet EmbeddingSet::normalized() const {
  EmbeddingSet out(dim_);
  for (std::size_t r = 0; r < size(); ++r) out.add(ids_[r], labels_[r], normalize(vector(r)));
  return out;
}

EmbeddingSet gen_synthetic(std::size_t n_classes, std::size_t per_class, std::size_t dim,
                           double spread, std::uint64_t seed) {
  ANNBENCH_CHECK(n_classes > 0 && per_class > 0 && dim > 0, "gen_synthetic: counts must be positive");
  ANNBENCH_CHECK(spread > 0.0, "gen_synthetic: spread must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> centroids(n_classes * dim);
  for (double& c : centroids) c = uniform(rng);

  std::normal_distribution<double> noise(0.0, spread);
  EmbeddingSet set(dim);
  std::vector<float> point(dim);
  Id next_id = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t p = 0; p < per_class; ++p) {
      for (std::size_t d = 0; d < dim; ++d)
        point[d] = static_cast<float>(centroids[c * dim + d] + noise(rng));
      set.add(next_id++, static_cast<Label>(c), point);
    }
  }
  return set;
}

std::vector<std::uint8_t> encode_vemb(const EmbeddingSet& set) {
  ByteWriter out;
  out.put_raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("VEMB"), 4));
  out.put<std::uint8_t>(1);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(set.dim()));
  out.put<std::uint64_t>(set.size());
  for (std::size_t r = 0; r < set.size(); ++r) {
    out.put<std::uint64_t>(set.id(r));
    out.put<std::uint32_t>(set.label(r));
    out.put_array(set.vector(r));
  }
  return out.take();
}

EmbeddingSet decode_vemb(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect_magic("VEMB");
  const auto version = in.get<std::uint8_t>();
  ANNBENCH_CHECK(version == 1, "unsupported VEMB version " + std::to_string(version));
  const auto dim = in.get<std::uint32_t>();
  const auto count = in.get<std::uint64_t>();
  ANNBENCH_CHECK(dim > 0, "VEMB: zero dimension");
  EmbeddingSet set(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto id = in.get<std::uint64_t>();
    const auto label = in.get<std::uint32_t>();
    const auto vec = in.get_array<float>(dim);
    set.add(id, label, vec);
  }
  ANNBENCH_CHECK(in.done(), "VEMB: trailing bytes after last record");
  return set;
}

void write_vemb(const EmbeddingSet& set, const std::filesystem::path& path) {
  write_file_bytes(path.string(), encode_vemb(set));
}

EmbeddingSet read_vemb(const std::filesystem::path& path) {
  return decode_vemb(read_file_bytes(path.string()));
}

EmbeddingSet read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  ANNBENCH_CHECK(in, "cannot open " + path.string());
  std::string line;
  ANNBENCH_CHECK(static_cast<bool>(std::getline(in, line)), "empty CSV file " + path.string());
  std::size_t columns = 1;
  for (char ch : line) columns += ch == ',';
  ANNBENCH_CHECK(line.rfind("id,label,f0", 0) == 0 && columns >= 3,
                 "CSV header must be id,label,f0,...");
  EmbeddingSet set(columns - 2);
  std::vector<float> vec(columns - 2);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    ANNBENCH_CHECK(cells.size() == columns, "CSV line " + std::to_string(line_no) + ": expected " +
                                                std::to_string(columns) + " fields");
    try {
      const Id id = std::stoull(cells[0]);
      const auto label = static_cast<Label>(std::stoul(cells[1]));
      for (std::size_t d = 0; d < vec.size(); ++d) vec[d] = std::stof(cells[d + 2]);
      set.add(id, label, vec);
    } catch (const std::logic_error&) {
      throw Error("CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return set;
}

void write_csv(const EmbeddingSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  ANNBENCH_CHECK(out, "cannot write " + path.string());
  out << "id,label";
  for (std::size_t d = 0; d < set.dim(); ++d) out << ",f" << d;
  out << '\n';
  out.precision(9);
  for (std::size_t r = 0; r < set.size(); ++r) {
    out << set.id(r) << ',' << set.label(r);
    for (float x : set.vector(r)) out << ',' << x;
    out << '\n';
  }
  ANNBENCH_CHECK(out.good(), "failed writing " + path.string());
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  ANNBENCH_CHECK(in, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  ANNBENCH_CHECK(out, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  ANNBENCH_CHECK(out.good(), "failed writing " + path);
}

}  // namespace annbench
