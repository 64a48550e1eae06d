#include <gtest/gtest.h>

#include <filesystem>

#include "annbench/error.hpp"
#include "annbench/registry.hpp"

namespace annbench {
namespace {

const EmbeddingSet& data() {
  static const EmbeddingSet set = gen_synthetic(8, 50, 16, 0.2, 11);  // 400 points
  return set;
}

std::vector<NamedFamily> all_families() {
  std::vector<NamedFamily> out;
  for (const char* name : {"flat-l2", "flat-ip", "pq", "ivf-flat", "ivf-pq", "ivf-sq", "lsh", "hnsw",
                           "annoy-angular", "annoy-euclidean", "annoy-manhattan"})
    out.push_back(family_defaults(name));
  return out;
}

class Persistence : public ::testing::TestWithParam<NamedFamily> {};

TEST_P(Persistence, RoundTripPreservesSearchAndBytes) {
  const auto& set = data();
  const auto index = build_index(set, GetParam().params, 5);
  const auto bytes = serialize_index(*index);
  const auto loaded = load_index(bytes);
  EXPECT_EQ(loaded->family(), index->family());
  EXPECT_EQ(loaded->metric(), index->metric());
  EXPECT_EQ(loaded->size(), index->size());
  EXPECT_EQ(loaded->describe(), index->describe());
  EXPECT_EQ(serialize_index(*loaded), bytes);
  for (std::size_t r = 0; r < set.size(); r += 17)
    for (std::size_t k : {1u, 6u, 30u}) {
      EXPECT_EQ(loaded->search(set.vector(r), k), index->search(set.vector(r), k));
      EXPECT_EQ(loaded->search(set.vector(r), k, set.id(r)), index->search(set.vector(r), k, set.id(r)));
    }
}

TEST_P(Persistence, FileRoundTrip) {
  const auto& set = data();
  const auto index = build_index(set, GetParam().params, 6);
  const auto path = std::filesystem::temp_directory_path() / ("annbench_persist_" + GetParam().name + ".vidx");
  save_index_file(*index, path);
  const auto loaded = load_index_file(path);
  std::filesystem::remove(path);
  EXPECT_EQ(serialize_index(*loaded), serialize_index(*index));
}

TEST_P(Persistence, TruncatedOrExtendedPayloadIsRejected) {
  const auto bytes = serialize_index(*build_index(data(), GetParam().params, 7));
  for (std::size_t cut : {std::size_t{6}, bytes.size() / 2, bytes.size() - 1}) {
    const std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
    EXPECT_THROW(load_index(truncated), Error) << "cut at " << cut;
  }
  auto extended = bytes;
  extended.push_back(0);
  EXPECT_THROW(load_index(extended), Error);
}

INSTANTIATE_TEST_SUITE_P(AllFamilies, Persistence, ::testing::ValuesIn(all_families()),
                         [](const auto& info) {
                           std::string name = info.param.name;
                           for (auto& c : name)
                             if (c == '-') c = '_';
                           return name;
                         });

TEST(PersistenceHeader, LayoutAndCorruption) {
  const auto bytes = serialize_index(*build_index(data(), FlatL2Params{}, 0));
  ASSERT_GE(bytes.size(), 6u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "VIDX");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(load_index(bad_magic), Error);
  auto bad_version = bytes;
  bad_version[4] = 2;
  EXPECT_THROW(load_index(bad_version), Error);
  auto bad_family = bytes;
  bad_family[5] = 9;
  EXPECT_THROW(load_index(bad_family), Error);
  EXPECT_THROW(load_index(std::vector<std::uint8_t>{}), Error);
  EXPECT_THROW(load_index_file("/nonexistent/annbench.vidx"), Error);
}

TEST(PersistenceHeader, FamilyTags) {
  const std::vector<std::pair<const char*, int>> tags{{"flat-l2", 0}, {"flat-ip", 1}, {"pq", 2},   {"ivf-flat", 3},
                                                      {"ivf-pq", 4},  {"ivf-sq", 5},  {"lsh", 6},  {"hnsw", 7},
                                                      {"annoy-angular", 8}};
  for (const auto& [name, tag] : tags)
    EXPECT_EQ(serialize_index(*build_index(data(), family_defaults(name).params, 1))[5], tag) << name;
}

}  // namespace
}  // namespace annbench
