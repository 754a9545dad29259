#include <fstream>
#include <map>
#include <set>

#include "core/counting.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/query.hpp"
#include "core/scene.hpp"
#include "doctest.h"
#include "support/fixture.hpp"

using namespace tomgen;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// One generated group shared by the tests below.
struct Built {
  fixture::TempDir dir{"dataset"};
  GroupConfig config = fixture::small_config();
  BuildSummary summary = build_group(config, dir.path(), 1);
};

Built& built() {
  static Built b;
  return b;
}

}  // namespace

TEST_CASE("group config validation") {
  GroupConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.eval_orders() == std::vector<int>{1, 2, 3});

  GroupConfig dense = c;
  dense.n = 6;
  dense.m = 13;
  CHECK_THROWS_AS(dense.validate(), Error);
  dense.require_medium_density = false;
  CHECK_NOTHROW(dense.validate());

  GroupConfig sparse = c;
  sparse.n = 6;
  sparse.m = 5;
  CHECK_THROWS_AS(sparse.validate(), Error);

  GroupConfig overlap = c;
  overlap.gen_orders = {1, 2};
  CHECK_THROWS_AS(overlap.validate(), Error);

  GroupConfig deep = c;
  deep.gen_orders = {2, 3, 4};
  CHECK_THROWS_AS(deep.validate(), Error);
  deep.allow_extrapolated_orders = true;
  CHECK_NOTHROW(deep.validate());
  deep.gen_orders = {2, 5};
  CHECK_THROWS_AS(deep.validate(), Error);  // k > n

  GroupConfig split = c;
  split.train_structures = 120;
  CHECK_THROWS_AS(split.validate(), Error);

  GroupConfig wide = c;
  wide.q = 11;
  CHECK_THROWS_AS(wide.validate(), Error);
}

TEST_CASE("config hash follows content") {
  GroupConfig a, b;
  CHECK(a.hash() == b.hash());
  b.master_seed = 1;
  CHECK(a.hash() != b.hash());
  GroupConfig c;
  c.pools.objects.push_back("coin");
  CHECK(a.hash() != c.hash());
}

TEST_CASE("structure selection uses the whole population when it equals the cap") {
  GroupConfig c;
  c.master_seed = 3;
  const StructureSplit s = select_structures(c);
  CHECK(s.population == 120);
  REQUIRE(s.selected.size() == 120);
  for (std::size_t i = 0; i < 120; ++i) CHECK(s.enumeration_index[i] == i);
  CHECK(std::count(s.heldout.begin(), s.heldout.end(), true) == 8);
  CHECK(s.train().size() == 112);
  CHECK(s.held_out().size() == 8);

  const StructureSplit again = select_structures(c);
  CHECK(again.heldout == s.heldout);
  c.master_seed = 4;
  CHECK(select_structures(c).heldout != s.heldout);
}

TEST_CASE("structure selection samples large populations") {
  GroupConfig c;
  c.n = 6;
  c.m = 8;
  c.master_seed = 5;
  const StructureSplit s = select_structures(c, 2);
  CHECK(s.population == 59760);
  REQUIRE(s.selected.size() == 120);
  CHECK(std::is_sorted(s.enumeration_index.begin(), s.enumeration_index.end()));
  CHECK(std::set<std::size_t>(s.enumeration_index.begin(), s.enumeration_index.end()).size() == 120);
  const StructureSplit t = select_structures(c, 1);
  CHECK(t.enumeration_index == s.enumeration_index);
}

TEST_CASE("structure cap above the population is an error") {
  GroupConfig c;
  c.n = 3;
  c.m = 2;
  c.require_medium_density = false;
  CHECK_THROWS_AS(select_structures(c), Error);
}

TEST_CASE("sample json round trip and escaping") {
  TaskSample s;
  s.sample_id = "x";
  s.n = 4;
  s.m = 4;
  s.q = 3;
  s.k = 2;
  s.structure_id = "abc";
  s.split = kSplitEvalSeen;
  s.flow = {2, 0};
  s.scene = "line \"one\"\n\ttab \\ back \x01 ctrl \xc3\xa9";
  s.query = "What?";
  s.answer = "box";
  s.seed = {7, "eval", 3, 99, 0, 18446744073709551615ull};
  CHECK(s.to_line() == s.to_json().dump() + "\n");
  const TaskSample back = TaskSample::from_json(json::parse(s.to_line()));
  CHECK(back.to_line() == s.to_line());
  CHECK(back.seed == s.seed);

  json broken = json::parse(s.to_line());
  broken.erase("answer");
  CHECK_THROWS_AS(TaskSample::from_json(broken), Error);
  json odd = json::parse(s.to_line());
  odd["split"] = "test";
  CHECK_THROWS_AS(TaskSample::from_json(odd), Error);
}

TEST_CASE("built group counts") {
  Built& b = built();
  const std::uint64_t per_structure = 81 * 36 * 4;
  CHECK(b.summary.train_records == 5 * per_structure);
  CHECK(b.summary.heldout_records == per_structure);
  CHECK(b.summary.seen_records == 5 * 8);
  CHECK(b.summary.eval_records == b.summary.heldout_records + b.summary.seen_records);
  const DatasetSize size = dataset_size(4, 4, 3, 6, 5);
  CHECK(b.summary.train_records == static_cast<std::uint64_t>(size.train));
  CHECK(b.summary.heldout_records == static_cast<std::uint64_t>(size.test));
  CHECK(read_lines(b.dir.path() / kTrainFile).size() == b.summary.train_records);
  CHECK(read_lines(b.dir.path() / kEvalFile).size() == b.summary.eval_records);
}

TEST_CASE("built group records are consistent") {
  Built& b = built();
  const GroupGenerator gen(b.config);
  std::set<std::string> ids;
  std::map<int, std::uint64_t> orders;
  for (const std::string& line : read_lines(b.dir.path() / kTrainFile)) {
    const TaskSample s = TaskSample::from_json(json::parse(line));
    CHECK(s.k == 1);
    CHECK(s.split == kSplitTrain);
    CHECK_FALSE(gen.split().heldout[s.seed.structure]);
    ids.insert(s.sample_id);
  }
  for (const std::string& line : read_lines(b.dir.path() / kEvalFile)) {
    const TaskSample s = TaskSample::from_json(json::parse(line));
    CHECK(s.split == (gen.split().heldout[s.seed.structure] ? kSplitEvalHeldout : kSplitEvalSeen));
    CHECK(s.flow.size() == static_cast<std::size_t>(s.k));
    CHECK(s.scene.find(s.answer) != std::string::npos);
    ++orders[s.k];
    ids.insert(s.sample_id);
  }
  CHECK(ids.size() == b.summary.train_records + b.summary.eval_records);
  REQUIRE(orders.size() == 3);
  // Orders are balanced within each structure block.
  const auto [lo, hi] = std::minmax({orders[1], orders[2], orders[3]});
  CHECK(hi - lo <= 6);
  CHECK(orders == b.summary.eval_per_order);
}

TEST_CASE("records regenerate from their lineage") {
  Built& b = built();
  const GroupGenerator gen(b.config);
  const auto lines = read_lines(b.dir.path() / kEvalFile);
  for (std::size_t i = 0; i < lines.size(); i += 997) {
    const TaskSample s = TaskSample::from_json(json::parse(lines[i]));
    CHECK(gen.regenerate(s.seed).to_line() == lines[i] + "\n");
  }
  const TaskSample first = TaskSample::from_json(json::parse(read_lines(b.dir.path() / kTrainFile)[0]));
  CHECK(gen.regenerate(first.seed).to_line() == read_lines(b.dir.path() / kTrainFile)[0] + "\n");
  SeedLineage bogus = first.seed;
  bogus.query = 5;
  CHECK_THROWS_AS(gen.regenerate(bogus), Error);
}

TEST_CASE("output does not depend on workers and dry runs match") {
  Built& b = built();
  fixture::TempDir other("dataset-w3");
  const BuildSummary s = build_group(b.config, other.path(), 3);
  CHECK(read_file(other.path() / kTrainFile) == read_file(b.dir.path() / kTrainFile));
  CHECK(read_file(other.path() / kEvalFile) == read_file(b.dir.path() / kEvalFile));
  CHECK(read_file(other.path() / kManifestFile) == read_file(b.dir.path() / kManifestFile));
  const BuildSummary dry = build_group(b.config, {}, 2);
  CHECK(dry.train_digest == b.summary.train_digest);
  CHECK(dry.eval_digest == b.summary.eval_digest);
  CHECK(dry.manifest == b.summary.manifest);
}

TEST_CASE("different seeds give different data") {
  const BuildSummary a = build_group(fixture::small_config(1), {}, 1);
  const BuildSummary b = build_group(fixture::small_config(2), {}, 1);
  CHECK(a.eval_digest != b.eval_digest);
  CHECK(a.eval_records == b.eval_records);
}

TEST_CASE("manifest restores the config") {
  Built& b = built();
  const json manifest = read_manifest(b.dir.path());
  const GroupConfig c = config_from_manifest(manifest);
  CHECK(c.hash() == b.config.hash());
  CHECK(c.pools == b.config.pools);
  CHECK(c.grammar == b.config.grammar);
  CHECK(manifest.at("structures").size() == 6);
  CHECK(manifest.at("files").at("train").at("records") == b.summary.train_records);
  json bad = manifest;
  bad["format_version"] = 99;
  CHECK_THROWS_AS(config_from_manifest(bad), Error);
}

TEST_CASE("verification of a fresh group passes") {
  const VerifyReport r = verify_dataset(built().dir.path());
  CHECK(r.ok());
  CHECK(r.records_checked == built().summary.train_records + built().summary.eval_records);
  CHECK(r.count_deltas.empty());
}

TEST_CASE("verification reports a single perturbed answer") {
  Built& b = built();
  fixture::TempDir copy("dataset-bad");
  fs::copy(b.dir.path(), copy.path(), fs::copy_options::overwrite_existing | fs::copy_options::recursive);
  auto lines = read_lines(copy.path() / kEvalFile);
  json rec = json::parse(lines[3]);
  const std::string answer = rec["answer"];
  const std::string other = answer == "basket" ? "box" : "basket";
  rec["answer"] = other;
  lines[3] = TaskSample::from_json(rec).to_line();
  lines[3].pop_back();
  std::ofstream out(copy.path() / kEvalFile, std::ios::binary | std::ios::trunc);
  for (const auto& l : lines) out << l << '\n';
  out.close();

  const VerifyReport r = verify_dataset(copy.path());
  CHECK_FALSE(r.ok());
  CHECK(r.mismatched_records == 1);
  CHECK(r.answer_mismatches == 1);
  CHECK(r.schema_violations == 0);
}

TEST_CASE("verification reports missing records") {
  Built& b = built();
  fixture::TempDir copy("dataset-short");
  fs::copy(b.dir.path(), copy.path(), fs::copy_options::overwrite_existing | fs::copy_options::recursive);
  auto lines = read_lines(copy.path() / kEvalFile);
  lines.pop_back();
  lines.pop_back();
  std::ofstream out(copy.path() / kEvalFile, std::ios::binary | std::ios::trunc);
  for (const auto& l : lines) out << l << '\n';
  out << "not json\n";
  out.close();
  const VerifyReport r = verify_dataset(copy.path());
  CHECK_FALSE(r.ok());
  CHECK(r.schema_violations == 1);
  CHECK(r.mismatched_records == 0);
  CHECK_FALSE(r.count_deltas.empty());
}

TEST_CASE("oracle answers for stored records and raw scenes") {
  Built& b = built();
  const auto lines = read_lines(b.dir.path() / kEvalFile);
  for (std::size_t i = 0; i < lines.size(); i += 1301) {
    const TaskSample s = TaskSample::from_json(json::parse(lines[i]));
    const OracleAnswer a = answer_record(b.dir.path(), s.sample_id);
    CHECK(a.answer == s.answer);
    CHECK(a.structure_id == s.structure_id);
    CHECK(a.flow == s.flow);

    const ParsedScene parsed = parse_scene(s.scene, default_pools());
    std::vector<std::string> names;
    for (NodeId v : s.flow) names.push_back(parsed.character_names[v]);
    CHECK(answer_scene(s.scene, names, default_pools()).answer == s.answer);
  }
  const std::string first_train =
      TaskSample::from_json(json::parse(read_lines(b.dir.path() / kTrainFile)[0])).sample_id;
  CHECK(answer_record(b.dir.path(), first_train).flow.size() == 1);
  CHECK_THROWS_AS(answer_record(b.dir.path(), "nope"), Error);
  const TaskSample s = TaskSample::from_json(json::parse(lines[0]));
  CHECK_THROWS_AS(answer_scene(s.scene, {"Nobody"}, default_pools()), Error);
}

TEST_CASE("dataset paths resolve from a directory, a file or a stem") {
  Built& b = built();
  const fs::path dir = b.dir.path();
  CHECK(resolve_data_path(dir, kEvalFile).first == dir / kEvalFile);
  CHECK(resolve_data_path(dir / kTrainFile, kEvalFile).first == dir / kTrainFile);
  CHECK(resolve_data_path(dir / "eval", kEvalFile).first == dir / kEvalFile);
  CHECK(resolve_data_path(dir / "eval", kEvalFile).second == dir);
  CHECK_THROWS_AS(resolve_data_path(dir / "missing", kEvalFile), Error);
}
