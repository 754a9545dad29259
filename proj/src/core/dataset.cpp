#include "core/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_map>

#include "core/counting.hpp"
#include "core/error.hpp"
#include "core/query.hpp"
#include "core/rng.hpp"
#include "core/scene.hpp"

namespace tomgen {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string sample_id(const GroupConfig& c, const std::string& branch, int structure,
                      std::uint64_t selection, int query) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "g%d%d%d-%s-%03d-%07llu-%d", c.n, c.m, c.q,
                branch == "train" ? "tr" : "ev", structure,
                static_cast<unsigned long long>(selection), query);
  return buf;
}

}  // namespace

void GroupConfig::validate() const {
  validate_shape(n, m);
  pools.validate();
  if (n > static_cast<int>(pools.characters.size())) {
    fail(ErrorCode::InvalidConfig, "character pool is smaller than n");
  }
  if (q < 1 || q > static_cast<int>(pools.containers.size())) {
    fail(ErrorCode::InvalidConfig, "q must be in [1, container pool size]");
  }
  if (learn_orders.empty() || gen_orders.empty()) {
    fail(ErrorCode::InvalidConfig, "learn and generalization orders must be non-empty");
  }
  for (int k : eval_orders()) {
    if (k < 1 || k > n) fail(ErrorCode::InvalidConfig, "order " + std::to_string(k) + " outside [1, n]");
    if (k > 3 && !allow_extrapolated_orders) {
      fail(ErrorCode::InvalidConfig,
           "order " + std::to_string(k) + " > 3 is extrapolated; enable allow_extrapolated_orders");
    }
  }
  if (*std::min_element(gen_orders.begin(), gen_orders.end()) <=
      *std::max_element(learn_orders.begin(), learn_orders.end())) {
    fail(ErrorCode::InvalidConfig, "min(generalization orders) must exceed max(learn orders)");
  }
  if (train_structures < 1 || train_structures >= structure_cap) {
    fail(ErrorCode::InvalidConfig, "need 1 <= train_structures < structure_cap");
  }
  if (samples_per_scene < 1) fail(ErrorCode::InvalidConfig, "samples_per_scene must be >= 1");
  if (probe_scenes < 0) fail(ErrorCode::InvalidConfig, "probe_scenes must be >= 0");
  if (require_medium_density) {
    const double d = graph_density(n, m);
    if (d < 0.40 - 1e-12 || d > 0.80 + 1e-12) {
      fail(ErrorCode::InvalidConfig, "density " + std::to_string(d) + " outside [0.40, 0.80]");
    }
  }
}

std::vector<int> GroupConfig::eval_orders() const {
  std::set<int> all(learn_orders.begin(), learn_orders.end());
  all.insert(gen_orders.begin(), gen_orders.end());
  return {all.begin(), all.end()};
}

ordered_json GroupConfig::to_json() const {
  return ordered_json{{"n", n},
                      {"m", m},
                      {"q", q},
                      {"learn_orders", learn_orders},
                      {"gen_orders", gen_orders},
                      {"structure_cap", structure_cap},
                      {"train_structures", train_structures},
                      {"probe_scenes", probe_scenes},
                      {"samples_per_scene", samples_per_scene},
                      {"master_seed", master_seed},
                      {"require_medium_density", require_medium_density},
                      {"allow_extrapolated_orders", allow_extrapolated_orders}};
}

std::string GroupConfig::hash() const {
  return hex64(fnv1a64(to_json().dump() + serialize_pools(pools) + serialize_grammar(grammar)));
}

ordered_json TaskSample::to_json() const {
  return ordered_json{{"sample_id", sample_id},
                      {"n", n},
                      {"m", m},
                      {"q", q},
                      {"k", k},
                      {"structure_id", structure_id},
                      {"split", split},
                      {"flow", flow},
                      {"scene", scene},
                      {"query", query},
                      {"answer", answer},
                      {"seed", ordered_json{{"master", seed.master},
                                            {"branch", seed.branch},
                                            {"structure", seed.structure},
                                            {"selection", seed.selection},
                                            {"query", seed.query},
                                            {"scene", seed.scene}}}};
}

namespace {

// Matches nlohmann's dump() escaping for valid UTF-8 input.
void append_json_string(std::string& out, std::string_view s) {
  out += '"';
  std::size_t run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (c >= 0x20 && c != '"' && c != '\\') continue;
    out.append(s.data() + run, i - run);
    run = i + 1;
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        out += buf;
    }
  }
  out.append(s.data() + run, s.size() - run);
  out += '"';
}

}  // namespace

std::string TaskSample::to_line() const {
  std::string out;
  out.reserve(scene.size() + query.size() + 320);
  auto key = [&out](const char* k) {
    out += '"';
    out += k;
    out += "\":";
  };
  auto num = [&out](auto v) { out += std::to_string(v); };
  out += '{';
  key("sample_id"); append_json_string(out, sample_id);
  out += ','; key("n"); num(n);
  out += ','; key("m"); num(m);
  out += ','; key("q"); num(q);
  out += ','; key("k"); num(k);
  out += ','; key("structure_id"); append_json_string(out, structure_id);
  out += ','; key("split"); append_json_string(out, split);
  out += ','; key("flow"); out += '[';
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (i) out += ',';
    num(flow[i]);
  }
  out += ']';
  out += ','; key("scene"); append_json_string(out, scene);
  out += ','; key("query"); append_json_string(out, query);
  out += ','; key("answer"); append_json_string(out, answer);
  out += ','; key("seed"); out += '{';
  key("master"); num(seed.master);
  out += ','; key("branch"); append_json_string(out, seed.branch);
  out += ','; key("structure"); num(seed.structure);
  out += ','; key("selection"); num(seed.selection);
  out += ','; key("query"); num(seed.query);
  out += ','; key("scene"); num(seed.scene);
  out += "}}\n";
  return out;
}

TaskSample TaskSample::from_json(const json& j) {
  try {
    TaskSample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    s.n = j.at("n").get<int>();
    s.m = j.at("m").get<int>();
    s.q = j.at("q").get<int>();
    s.k = j.at("k").get<int>();
    s.structure_id = j.at("structure_id").get<std::string>();
    s.split = j.at("split").get<std::string>();
    s.flow = j.at("flow").get<std::vector<NodeId>>();
    s.scene = j.at("scene").get<std::string>();
    s.query = j.at("query").get<std::string>();
    s.answer = j.at("answer").get<std::string>();
    const json& seed = j.at("seed");
    s.seed.master = seed.at("master").get<std::uint64_t>();
    s.seed.branch = seed.at("branch").get<std::string>();
    s.seed.structure = seed.at("structure").get<int>();
    s.seed.selection = seed.at("selection").get<std::uint64_t>();
    s.seed.query = seed.at("query").get<int>();
    s.seed.scene = seed.at("scene").get<std::uint64_t>();
    if (s.split != kSplitTrain && s.split != kSplitEvalSeen && s.split != kSplitEvalHeldout) {
      fail(ErrorCode::ParseError, "unknown split '" + s.split + "'");
    }
    if (s.seed.branch != "train" && s.seed.branch != "eval") {
      fail(ErrorCode::ParseError, "unknown seed branch '" + s.seed.branch + "'");
    }
    return s;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("record schema: ") + e.what());
  }
}

std::vector<GraphStructure> StructureSplit::train() const {
  std::vector<GraphStructure> out;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (!heldout[i]) out.push_back(selected[i]);
  }
  return out;
}

std::vector<GraphStructure> StructureSplit::held_out() const {
  std::vector<GraphStructure> out;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (heldout[i]) out.push_back(selected[i]);
  }
  return out;
}

StructureSplit select_structures(const GroupConfig& config, int workers) {
  config.validate();
  std::vector<GraphStructure> population = enumerate_structures(config.n, config.m, workers);
  const std::size_t cap = static_cast<std::size_t>(config.structure_cap);
  if (population.size() < cap) {
    fail(ErrorCode::CapExceedsPopulation,
         "structure cap " + std::to_string(cap) + " exceeds the " +
             std::to_string(population.size()) + " valid structures");
  }
  std::vector<std::size_t> picks(population.size());
  std::iota(picks.begin(), picks.end(), 0);
  if (population.size() > cap) {
    Rng rng(derive_seed(config.master_seed, "select"));
    for (std::size_t i = 0; i < cap; ++i) {
      std::swap(picks[i], picks[i + rng.below(picks.size() - i)]);
    }
    picks.resize(cap);
    std::sort(picks.begin(), picks.end());
  }

  StructureSplit split;
  split.population = population.size();
  for (std::size_t index : picks) {
    split.selected.push_back(population[index]);
    split.enumeration_index.push_back(index);
  }
  std::vector<std::size_t> order(cap);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(config.master_seed, "split"));
  rng.shuffle(std::span<std::size_t>(order));
  split.heldout.assign(cap, true);
  for (int i = 0; i < config.train_structures; ++i) split.heldout[order[i]] = false;
  return split;
}

GroupGenerator::GroupGenerator(GroupConfig config, int workers)
    : GroupGenerator(config, select_structures(config, workers)) {}

GroupGenerator::GroupGenerator(GroupConfig config, StructureSplit split)
    : config_(std::move(config)), split_(std::move(split)) {
  config_.validate();
  cross_product_ = selection_space_size(config_.n, config_.q, config_.pools);
  for (const GraphStructure& s : split_.selected) {
    templates_.push_back(render_template(s, config_.q, config_.grammar));
  }
}

std::uint64_t GroupGenerator::branch_seed(const std::string& branch) const {
  return derive_seed(config_.master_seed, branch);
}

std::vector<GroupGenerator::Query> GroupGenerator::plan(int structure,
                                                        const std::string& branch) const {
  const GraphStructure& s = split_.selected.at(structure);
  const std::uint64_t structure_seed = derive_seed(branch_seed(branch), s.id());

  std::vector<std::uint64_t> selections;
  std::vector<int> orders;
  if (branch == "train") {
    selections.resize(cross_product_);
    std::iota(selections.begin(), selections.end(), 0);
    orders = config_.learn_orders;
  } else {
    orders = config_.eval_orders();
    if (split_.heldout.at(structure) ||
        static_cast<std::uint64_t>(config_.probe_scenes) >= cross_product_) {
      selections.resize(cross_product_);
      std::iota(selections.begin(), selections.end(), 0);
    } else {
      // Distinct probe selections by partial Fisher-Yates over the index
      // space, tracked sparsely.
      Rng rng(derive_seed(structure_seed, "probe"));
      std::map<std::uint64_t, std::uint64_t> swapped;
      auto at = [&swapped](std::uint64_t i) {
        auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
      };
      for (int i = 0; i < config_.probe_scenes; ++i) {
        const std::uint64_t j = i + rng.below(cross_product_ - i);
        const std::uint64_t vi = at(i), vj = at(j);
        swapped[i] = vj;
        swapped[j] = vi;
        selections.push_back(vj);
      }
      std::sort(selections.begin(), selections.end());
    }
  }

  const std::size_t total = selections.size() * config_.samples_per_scene;
  // Orders are balanced over the block, then shuffled.
  std::vector<int> ks(total);
  for (std::size_t i = 0; i < total; ++i) ks[i] = orders[i % orders.size()];
  if (orders.size() > 1) {
    Rng rng(derive_seed(structure_seed, "orders"));
    rng.shuffle(std::span<int>(ks));
  }
  std::vector<Query> out;
  out.reserve(total);
  std::size_t r = 0;
  for (std::uint64_t sel : selections) {
    for (int j = 0; j < config_.samples_per_scene; ++j) out.push_back({sel, j, ks[r++]});
  }
  return out;
}

TaskSample GroupGenerator::make_sample(int structure, const std::string& branch,
                                       const Query& query) const {
  const GraphStructure& s = split_.selected.at(structure);
  const std::uint64_t scene_seed =
      derive_seed(derive_seed(branch_seed(branch), s.id()), query.selection);

  const SceneTemplate& tmpl = templates_.at(structure);
  const Selection selection = selection_from_index(query.selection, config_.n, config_.q, config_.pools);
  Rng attributes(scene_seed);
  const SceneInstance scene = instantiate(tmpl, config_.pools, selection, attributes);

  Rng flow_stream(derive_seed(scene_seed, static_cast<std::uint64_t>(query.index)));
  const BeliefFlow flow = sample_flow(s, query.k, flow_stream);

  TaskSample sample;
  sample.sample_id = sample_id(config_, branch, structure, query.selection, query.index);
  sample.n = config_.n;
  sample.m = config_.m;
  sample.q = config_.q;
  sample.k = query.k;
  sample.structure_id = s.id();
  sample.split = branch == "train" ? kSplitTrain
                                   : (split_.heldout[structure] ? kSplitEvalHeldout : kSplitEvalSeen);
  sample.flow = flow.characters;
  sample.scene = scene.text;
  sample.query = render_query(flow, scene, config_.grammar);
  sample.answer = scene.container_names[derive_truth(s, scene.beliefs, flow)];
  sample.seed = {config_.master_seed, branch, structure, query.selection, query.index, scene_seed};
  return sample;
}

std::vector<TaskSample> GroupGenerator::train_block(int structure) const {
  if (split_.heldout.at(structure)) return {};
  std::vector<TaskSample> out;
  for (const Query& q : plan(structure, "train")) out.push_back(make_sample(structure, "train", q));
  return out;
}

std::vector<TaskSample> GroupGenerator::eval_block(int structure) const {
  std::vector<TaskSample> out;
  for (const Query& q : plan(structure, "eval")) out.push_back(make_sample(structure, "eval", q));
  return out;
}

TaskSample GroupGenerator::regenerate(const SeedLineage& lineage) const {
  if (lineage.structure < 0 || lineage.structure >= static_cast<int>(split_.selected.size())) {
    fail(ErrorCode::InvalidArgument, "lineage structure out of range");
  }
  if (lineage.branch == "train" && split_.heldout[lineage.structure]) {
    fail(ErrorCode::InvalidArgument, "held-out structure has no training records");
  }
  for (const Query& q : plan(lineage.structure, lineage.branch)) {
    if (q.selection == lineage.selection && q.index == lineage.query) {
      return make_sample(lineage.structure, lineage.branch, q);
    }
  }
  fail(ErrorCode::InvalidArgument, "lineage does not name a planned record");
}

namespace {

// Renders structure blocks on `workers` threads in bounded windows and hands
// them to `emit` in structure order.
template <typename BlockFn, typename EmitFn>
void ordered_blocks(int count, int workers, BlockFn block, EmitFn emit) {
  const int window = std::max(1, workers) * 2;
  for (int base = 0; base < count; base += window) {
    const int end = std::min(count, base + window);
    std::vector<std::string> rendered(end - base);
    std::atomic<int> next{base};
    auto work = [&] {
      for (int i = next++; i < end; i = next++) rendered[i - base] = block(i);
    };
    {
      std::vector<std::jthread> pool;
      for (int t = 1; t < std::min(workers, end - base); ++t) pool.emplace_back(work);
      work();
    }
    for (auto& text : rendered) emit(text);
  }
}

std::string render_block(const std::vector<TaskSample>& samples) {
  std::string out;
  for (const TaskSample& s : samples) out += s.to_line();
  return out;
}

// FNV-1a continued over successive chunks.
struct StreamDigest {
  std::uint64_t state = 0xcbf29ce484222325ULL;
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state ^= c;
      state *= 0x100000001b3ULL;
    }
  }
};

ordered_json structure_json(const GraphStructure& s, std::size_t position, std::size_t index,
                            bool heldout) {
  ordered_json edges = ordered_json::array();
  for (const Edge& e : s.edges()) edges.push_back({e.from, e.to});
  return ordered_json{{"position", position},
                      {"enumeration_index", index},
                      {"structure_id", s.id()},
                      {"exit_order", std::vector<NodeId>(s.exit_order().begin(), s.exit_order().end())},
                      {"edges", edges},
                      {"split", heldout ? "heldout" : "train"}};
}

}  // namespace

BuildSummary build_group(const GroupConfig& config, const fs::path& out_dir, int workers) {
  config.validate();
  workers = std::max(1, workers);
  const GroupGenerator generator(config, workers);
  const StructureSplit& split = generator.split();
  const int count = static_cast<int>(split.selected.size());

  std::ofstream train_out, eval_out;
  const bool write = !out_dir.empty();
  if (write) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
    train_out.open(out_dir / kTrainFile, std::ios::binary | std::ios::trunc);
    eval_out.open(out_dir / kEvalFile, std::ios::binary | std::ios::trunc);
    if (!train_out || !eval_out) fail(ErrorCode::IoError, "cannot open output files in " + out_dir.string());
  }

  BuildSummary summary;
  StreamDigest train_digest, eval_digest;
  std::vector<std::uint64_t> per_structure_eval(count, 0);

  ordered_blocks(
      count, workers, [&](int i) { return render_block(generator.train_block(i)); },
      [&](const std::string& text) {
        summary.train_records += std::count(text.begin(), text.end(), '\n');
        train_digest.update(text);
        if (write) train_out.write(text.data(), static_cast<std::streamsize>(text.size()));
      });

  // Order counts are tallied while rendering, per structure.
  std::vector<std::map<int, std::uint64_t>> order_counts(count);
  ordered_blocks(
      count, workers,
      [&](int i) {
        auto block = generator.eval_block(i);
        for (const TaskSample& s : block) ++order_counts[i][s.k];
        per_structure_eval[i] = block.size();
        return render_block(block);
      },
      [&](const std::string& text) {
        summary.eval_records += std::count(text.begin(), text.end(), '\n');
        eval_digest.update(text);
        if (write) eval_out.write(text.data(), static_cast<std::streamsize>(text.size()));
      });
  for (int i = 0; i < count; ++i) {
    (split.heldout[i] ? summary.heldout_records : summary.seen_records) += per_structure_eval[i];
    for (auto [k, c] : order_counts[i]) summary.eval_per_order[k] += c;
  }
  summary.train_digest = hex64(train_digest.state);
  summary.eval_digest = hex64(eval_digest.state);

  ordered_json structures = ordered_json::array();
  for (int i = 0; i < count; ++i) {
    structures.push_back(structure_json(split.selected[i], i, split.enumeration_index[i], split.heldout[i]));
  }
  ordered_json per_order = ordered_json::object();
  for (auto [k, c] : summary.eval_per_order) per_order[std::to_string(k)] = c;

  ordered_json& manifest = summary.manifest;
  manifest["format_version"] = kDatasetFormatVersion;
  manifest["tool"] = "tomgen";
  manifest["tool_version"] = kToolVersion;
  manifest["config"] = config.to_json();
  manifest["config_hash"] = config.hash();
  manifest["pools"] = ordered_json{{"characters", config.pools.characters},
                                   {"containers", config.pools.containers},
                                   {"objects", config.pools.objects}};
  manifest["pool_hash"] = hex64(fnv1a64(serialize_pools(config.pools)));
  manifest["grammar"] = serialize_grammar(config.grammar);
  manifest["grammar_hash"] = hex64(fnv1a64(serialize_grammar(config.grammar)));
  manifest["seeds"] = ordered_json{{"master", config.master_seed},
                                   {"select", derive_seed(config.master_seed, "select")},
                                   {"split", derive_seed(config.master_seed, "split")},
                                   {"train", generator.branch_seed("train")},
                                   {"eval", generator.branch_seed("eval")}};
  manifest["population"] = split.population;
  manifest["scenes_per_structure"] = generator.scenes_per_structure();
  manifest["structures"] = structures;
  manifest["files"] = ordered_json{
      {"train", ordered_json{{"path", kTrainFile},
                             {"records", summary.train_records},
                             {"fnv1a64", summary.train_digest}}},
      {"eval", ordered_json{{"path", kEvalFile},
                            {"records", summary.eval_records},
                            {"heldout_records", summary.heldout_records},
                            {"seen_records", summary.seen_records},
                            {"per_order", per_order},
                            {"fnv1a64", summary.eval_digest}}}};

  if (write) {
    train_out.close();
    eval_out.close();
    std::ofstream m(out_dir / kManifestFile, std::ios::binary | std::ios::trunc);
    if (!m) fail(ErrorCode::IoError, "cannot write manifest");
    m << manifest.dump(2) << '\n';
    if (!train_out || !eval_out || !m) fail(ErrorCode::IoError, "write failed in " + out_dir.string());
  }
  return summary;
}

json read_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestFile);
  if (!in) fail(ErrorCode::IoError, "cannot open " + (dir / kManifestFile).string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
}

GroupConfig config_from_manifest(const json& manifest) {
  try {
    if (manifest.at("format_version").get<int>() != kDatasetFormatVersion) {
      fail(ErrorCode::ParseError, "unsupported dataset format version");
    }
    const json& c = manifest.at("config");
    GroupConfig config;
    config.n = c.at("n");
    config.m = c.at("m");
    config.q = c.at("q");
    config.learn_orders = c.at("learn_orders").get<std::vector<int>>();
    config.gen_orders = c.at("gen_orders").get<std::vector<int>>();
    config.structure_cap = c.at("structure_cap");
    config.train_structures = c.at("train_structures");
    config.probe_scenes = c.at("probe_scenes");
    config.samples_per_scene = c.at("samples_per_scene");
    config.master_seed = c.at("master_seed").get<std::uint64_t>();
    config.require_medium_density = c.at("require_medium_density");
    config.allow_extrapolated_orders = c.at("allow_extrapolated_orders");
    const json& p = manifest.at("pools");
    config.pools = {p.at("characters").get<std::vector<std::string>>(),
                    p.at("containers").get<std::vector<std::string>>(),
                    p.at("objects").get<std::vector<std::string>>()};
    config.grammar = parse_grammar(manifest.at("grammar").get<std::string>());
    return config;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
}

ordered_json VerifyReport::to_json() const {
  return ordered_json{{"ok", ok()},
                      {"records_checked", records_checked},
                      {"mismatched_records", mismatched_records},
                      {"answer_mismatches", answer_mismatches},
                      {"structure_mismatches", structure_mismatches},
                      {"regeneration_mismatches", regeneration_mismatches},
                      {"schema_violations", schema_violations},
                      {"count_deltas", count_deltas},
                      {"examples", examples}};
}

VerifyReport verify_dataset(const fs::path& dir, int workers) {
  const json manifest = read_manifest(dir);
  const GroupConfig config = config_from_manifest(manifest);
  const GroupGenerator generator(config, workers);
  const StructureSplit& split = generator.split();

  VerifyReport report;
  auto note = [&report](std::string text) {
    if (report.examples.size() < 20) report.examples.push_back(std::move(text));
  };

  // The stored structure list must match a fresh selection.
  const json& listed = manifest.at("structures");
  if (listed.size() != split.selected.size()) {
    report.count_deltas.push_back("manifest lists " + std::to_string(listed.size()) +
                                  " structures, selection yields " +
                                  std::to_string(split.selected.size()));
  } else {
    for (std::size_t i = 0; i < listed.size(); ++i) {
      const bool heldout = listed[i].at("split") == "heldout";
      if (listed[i].at("structure_id") != split.selected[i].id() || heldout != split.heldout[i]) {
        ++report.structure_mismatches;
        note("manifest structure " + std::to_string(i) + " differs from selection");
      }
    }
  }

  const std::vector<int> learn = config.learn_orders;
  const std::vector<int> eval_orders = config.eval_orders();
  std::set<std::string> ids;

  auto check_file = [&](const char* name, bool is_train, std::uint64_t& records,
                        std::vector<std::uint64_t>& per_structure) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + (dir / name).string());
    per_structure.assign(split.selected.size(), 0);
    // Regenerated records of the current structure block, keyed by id.
    std::unordered_map<std::string, std::string> cached;
    int cached_structure = -1;
    std::string line;
    while (std::getline(in, line)) {
      ++records;
      ++report.records_checked;
      TaskSample sample;
      try {
        sample = TaskSample::from_json(json::parse(line));
      } catch (const std::exception& e) {
        ++report.schema_violations;
        note(std::string(name) + ":" + std::to_string(records) + ": " + e.what());
        continue;
      }
      bool bad = false;
      const bool expect_branch = sample.seed.branch == (is_train ? "train" : "eval");
      const bool split_ok = is_train ? sample.split == kSplitTrain : sample.split != kSplitTrain;
      const auto& orders = is_train ? learn : eval_orders;
      const bool order_ok = std::find(orders.begin(), orders.end(), sample.k) != orders.end();
      if (!expect_branch || !split_ok || !order_ok || !ids.insert(sample.sample_id).second ||
          sample.n != config.n || sample.m != config.m || sample.q != config.q ||
          sample.seed.structure < 0 ||
          sample.seed.structure >= static_cast<int>(split.selected.size())) {
        ++report.schema_violations;
        note(sample.sample_id + ": metadata violates the group schema");
        continue;
      }
      ++per_structure[sample.seed.structure];

      try {
        const ParsedScene parsed = parse_scene(sample.scene, config.pools, config.grammar);
        const GraphStructure& expected = split.selected[sample.seed.structure];
        if (parsed.structure.id() != sample.structure_id || expected.id() != sample.structure_id) {
          ++report.structure_mismatches;
          bad = true;
          note(sample.sample_id + ": scene does not map to its structure");
        }
        const int truth = derive_truth(parsed.structure, parsed.beliefs, BeliefFlow{sample.flow});
        if (parsed.container_names[truth] != sample.answer) {
          ++report.answer_mismatches;
          bad = true;
          note(sample.sample_id + ": stored answer '" + sample.answer + "', derived '" +
               parsed.container_names[truth] + "'");
        }
      } catch (const Error& e) {
        ++report.answer_mismatches;
        bad = true;
        note(sample.sample_id + ": " + e.what());
      }
      try {
        if (sample.seed.structure != cached_structure) {
          cached.clear();
          cached_structure = sample.seed.structure;
          const auto block = is_train ? generator.train_block(cached_structure)
                                      : generator.eval_block(cached_structure);
          for (const TaskSample& s : block) cached.emplace(s.sample_id, s.to_line());
        }
        auto hit = cached.find(sample.sample_id);
        if (hit == cached.end()) {
          ++report.regeneration_mismatches;
          bad = true;
          note(sample.sample_id + ": no such record in the regenerated block");
        } else if (hit->second != line + '\n') {
          ++report.regeneration_mismatches;
          bad = true;
          note(sample.sample_id + ": record differs from its regeneration");
        }
      } catch (const Error& e) {
        ++report.regeneration_mismatches;
        bad = true;
        note(sample.sample_id + ": " + e.what());
      }
      if (bad) ++report.mismatched_records;
    }
  };

  std::uint64_t train_records = 0, eval_records = 0;
  std::vector<std::uint64_t> train_per, eval_per;
  check_file(kTrainFile, true, train_records, train_per);
  check_file(kEvalFile, false, eval_records, eval_per);

  auto delta = [&report](const std::string& what, std::uint64_t expected, std::uint64_t actual) {
    if (expected != actual) {
      report.count_deltas.push_back(what + ": expected " + std::to_string(expected) + ", found " +
                                    std::to_string(actual));
    }
  };
  const json& files = manifest.at("files");
  delta("train records vs manifest", files.at("train").at("records").get<std::uint64_t>(), train_records);
  delta("eval records vs manifest", files.at("eval").at("records").get<std::uint64_t>(), eval_records);

  const DatasetSize size = dataset_size(config.n, config.m, config.q, config.structure_cap,
                                        config.train_structures, config.pools.sizes(),
                                        config.samples_per_scene);
  delta("train records vs dataset_size", static_cast<std::uint64_t>(size.train), train_records);
  std::uint64_t heldout = 0;
  const std::uint64_t per_train = generator.scenes_per_structure() * config.samples_per_scene;
  const std::uint64_t per_probe =
      std::min<std::uint64_t>(config.probe_scenes, generator.scenes_per_structure()) *
      config.samples_per_scene;
  for (std::size_t i = 0; i < split.selected.size(); ++i) {
    const std::string which = std::to_string(i);
    if (split.heldout[i]) {
      heldout += eval_per[i];
      delta("train records of held-out structure " + which, 0, train_per[i]);
      delta("eval records of held-out structure " + which, per_train, eval_per[i]);
    } else {
      delta("train records of structure " + which, per_train, train_per[i]);
      delta("eval records of structure " + which, per_probe, eval_per[i]);
    }
  }
  delta("held-out eval records vs dataset_size", static_cast<std::uint64_t>(size.test), heldout);
  return report;
}

OracleAnswer answer_scene(const std::string& scene_text, const std::vector<std::string>& flow_names,
                          const SemanticPools& pools, const Grammar& grammar) {
  const ParsedScene parsed = parse_scene(scene_text, pools, grammar);
  BeliefFlow flow;
  for (const std::string& name : flow_names) {
    auto it = std::find(parsed.character_names.begin(), parsed.character_names.end(), name);
    if (it == parsed.character_names.end()) {
      fail(ErrorCode::InvalidFlow, "'" + name + "' does not appear in the scene");
    }
    flow.characters.push_back(static_cast<NodeId>(it - parsed.character_names.begin()));
  }
  const int truth = derive_truth(parsed.structure, parsed.beliefs, flow);
  return {parsed.container_names[truth], truth, parsed.structure.id(), flow.characters};
}

std::pair<fs::path, fs::path> resolve_data_path(const fs::path& data, const char* default_file) {
  if (fs::is_directory(data)) return {data / default_file, data};
  if (fs::is_regular_file(data)) {
    return {data, data.has_parent_path() ? data.parent_path() : fs::path(".")};
  }
  fs::path with_ext = data;
  with_ext += ".jsonl";
  if (fs::is_regular_file(with_ext)) {
    return {with_ext, with_ext.has_parent_path() ? with_ext.parent_path() : fs::path(".")};
  }
  fail(ErrorCode::IoError, "no dataset at " + data.string());
}

OracleAnswer answer_record(const fs::path& data, const std::string& id) {
  auto [file, dir] = resolve_data_path(data, kEvalFile);
  const GroupConfig config = config_from_manifest(read_manifest(dir));
  std::vector<fs::path> files{file};
  if (fs::is_directory(data)) files.push_back(dir / kTrainFile);
  for (const fs::path& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
    std::string line;
    const std::string needle = "\"sample_id\":\"" + id + "\"";
    while (std::getline(in, line)) {
      if (line.find(needle) == std::string::npos) continue;
      const TaskSample sample = TaskSample::from_json(json::parse(line));
      const ParsedScene parsed = parse_scene(sample.scene, config.pools, config.grammar);
      const int truth = derive_truth(parsed.structure, parsed.beliefs, BeliefFlow{sample.flow});
      return {parsed.container_names[truth], truth, parsed.structure.id(), sample.flow};
    }
  }
  fail(ErrorCode::InvalidArgument, "sample '" + id + "' not found");
}

}  // namespace tomgen
