#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/belief_graph.hpp"
#include "core/grammar.hpp"
#include "core/pools.hpp"
#include "core/scene.hpp"
#include "json.hpp"

namespace tomgen {

inline constexpr int kDatasetFormatVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kTrainFile = "train.jsonl";
inline constexpr const char* kEvalFile = "eval.jsonl";
inline constexpr const char* kManifestFile = "manifest.json";

/// One experimental group: structure shape (n, m), container count q, and
/// the order split between learning and generalization.
struct GroupConfig {
  int n = 4;
  int m = 4;
  int q = 3;
  std::vector<int> learn_orders{1};
  std::vector<int> gen_orders{2, 3};
  int structure_cap = 120;
  int train_structures = 112;
  /// Evaluation scenes drawn per training structure (held-out structures
  /// always get their full semantic cross product).
  int probe_scenes = 64;
  int samples_per_scene = 1;
  std::uint64_t master_seed = 0;
  bool require_medium_density = true;
  bool allow_extrapolated_orders = false;
  SemanticPools pools = default_pools();
  Grammar grammar = default_grammar();

  /// Throws invalid-config.
  void validate() const;
  /// learn_orders and gen_orders merged and sorted.
  std::vector<int> eval_orders() const;
  nlohmann::ordered_json to_json() const;
  std::string hash() const;
};

struct SeedLineage {
  std::uint64_t master = 0;
  std::string branch;          // "train" or "eval"
  int structure = 0;           // position in the selected structure list
  std::uint64_t selection = 0; // cross-product index
  int query = 0;               // query index within the scene
  std::uint64_t scene = 0;     // derived scene seed

  friend bool operator==(const SeedLineage&, const SeedLineage&) = default;
};

inline constexpr const char* kSplitTrain = "train";
inline constexpr const char* kSplitEvalSeen = "eval-seen";
inline constexpr const char* kSplitEvalHeldout = "eval-heldout";

struct TaskSample {
  std::string sample_id;
  int n = 0, m = 0, q = 0, k = 0;
  std::string structure_id;
  std::string split;
  std::vector<NodeId> flow;
  std::string scene;
  std::string query;
  std::string answer;
  SeedLineage seed;

  nlohmann::ordered_json to_json() const;
  /// Throws parse-error on schema violations.
  static TaskSample from_json(const nlohmann::json& j);
  std::string to_line() const;  // compact JSON plus '\n'
};

struct StructureSplit {
  std::vector<GraphStructure> selected;          // enumeration order
  std::vector<std::size_t> enumeration_index;
  std::vector<bool> heldout;
  std::size_t population = 0;

  std::vector<GraphStructure> train() const;
  std::vector<GraphStructure> held_out() const;
};

/// Samples structure_cap structures from the full enumeration (all of them
/// when the population equals the cap) and splits them by seeded shuffle.
StructureSplit select_structures(const GroupConfig& config, int workers = 1);

/// Deterministic record factory for one group.
class GroupGenerator {
 public:
  explicit GroupGenerator(GroupConfig config, int workers = 1);
  GroupGenerator(GroupConfig config, StructureSplit split);

  const GroupConfig& config() const { return config_; }
  const StructureSplit& split() const { return split_; }
  std::uint64_t scenes_per_structure() const { return cross_product_; }

  /// Records of one structure block, in file order.
  std::vector<TaskSample> train_block(int structure) const;
  std::vector<TaskSample> eval_block(int structure) const;

  /// Rebuilds a single record from its lineage.
  TaskSample regenerate(const SeedLineage& lineage) const;

  std::uint64_t branch_seed(const std::string& branch) const;

 private:
  struct Query {
    std::uint64_t selection;
    int index;
    int k;
  };
  std::vector<Query> plan(int structure, const std::string& branch) const;
  TaskSample make_sample(int structure, const std::string& branch, const Query& query) const;

  GroupConfig config_;
  StructureSplit split_;
  std::uint64_t cross_product_ = 0;
  std::vector<SceneTemplate> templates_;  // one per selected structure
};

struct BuildSummary {
  std::uint64_t train_records = 0;
  std::uint64_t eval_records = 0;
  std::uint64_t heldout_records = 0;
  std::uint64_t seen_records = 0;
  std::map<int, std::uint64_t> eval_per_order;
  std::string train_digest;  // FNV-1a of the file bytes
  std::string eval_digest;
  nlohmann::ordered_json manifest;
};

/// Generates the group. With an empty `out_dir` the records are produced and
/// counted but not written. Output bytes do not depend on `workers`.
BuildSummary build_group(const GroupConfig& config, const std::filesystem::path& out_dir,
                         int workers = 1);

/// Reconstructs a config (pools and grammar included) from a manifest.
GroupConfig config_from_manifest(const nlohmann::json& manifest);
nlohmann::json read_manifest(const std::filesystem::path& dir);

struct VerifyReport {
  std::uint64_t records_checked = 0;
  std::uint64_t mismatched_records = 0;
  std::uint64_t answer_mismatches = 0;
  std::uint64_t structure_mismatches = 0;
  std::uint64_t regeneration_mismatches = 0;
  std::uint64_t schema_violations = 0;
  std::vector<std::string> count_deltas;
  std::vector<std::string> examples;  // first few problems

  bool ok() const {
    return mismatched_records == 0 && schema_violations == 0 && count_deltas.empty();
  }
  nlohmann::ordered_json to_json() const;
};

/// Re-derives every record from its metadata: parses the scene back to a
/// structure, recomputes the answer, and regenerates the record bytes.
VerifyReport verify_dataset(const std::filesystem::path& dir, int workers = 1);

/// Answer for a scene text and flow given by character names.
struct OracleAnswer {
  std::string answer;
  int container = 0;
  std::string structure_id;
  std::vector<NodeId> flow;
};
OracleAnswer answer_scene(const std::string& scene_text, const std::vector<std::string>& flow_names,
                          const SemanticPools& pools, const Grammar& grammar = default_grammar());

/// Finds `sample_id` in the dataset directory (or a .jsonl file next to its
/// manifest) and re-derives its answer.
OracleAnswer answer_record(const std::filesystem::path& data, const std::string& sample_id);

/// Resolves a dataset argument: a directory, a .jsonl file, or a path that
/// names one without the extension. Returns the record file and its
/// directory.
std::pair<std::filesystem::path, std::filesystem::path> resolve_data_path(
    const std::filesystem::path& data, const char* default_file);

}  // namespace tomgen
