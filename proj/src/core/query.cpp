#include "core/query.hpp"

#include <algorithm>
#include <numeric>

#include "core/error.hpp"

namespace tomgen {

BeliefFlow sample_flow(const GraphStructure& structure, int k, Rng& stream) {
  const int n = structure.node_count();
  if (k < 1 || k > n) {
    fail(ErrorCode::InvalidOrder, "order " + std::to_string(k) + " needs 1 <= k <= n=" +
                                      std::to_string(n));
  }
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  // Partial Fisher-Yates: position i takes a uniform pick from the rest.
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(stream.below(n - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  return BeliefFlow{std::move(ids)};
}

std::string render_query(const BeliefFlow& flow, const SceneInstance& scene,
                         const Grammar& grammar) {
  validate_flow(flow, static_cast<int>(scene.character_names.size()));
  std::string text = fill_slots(grammar.query_open,
                                {{"c", scene.character_names[flow.characters[0]]}});
  for (std::size_t i = 1; i < flow.characters.size(); ++i) {
    text += fill_slots(grammar.query_nested, {{"c", scene.character_names[flow.characters[i]]}});
  }
  text += fill_slots(grammar.query_close, {{"a", scene.object_name}});
  return text;
}

void validate_flow(const BeliefFlow& flow, int n) {
  if (flow.characters.empty()) fail(ErrorCode::InvalidFlow, "empty flow");
  std::vector<bool> used(n, false);
  for (NodeId v : flow.characters) {
    if (v < 0 || v >= n) fail(ErrorCode::InvalidFlow, "flow node " + std::to_string(v) + " out of range");
    if (used[v]) fail(ErrorCode::InvalidFlow, "flow repeats node " + std::to_string(v));
    used[v] = true;
  }
}

int derive_truth(const GraphStructure& structure, std::span<const int> beliefs,
                 const BeliefFlow& flow) {
  validate_flow(flow, structure.node_count());
  if (static_cast<int>(beliefs.size()) != structure.node_count()) {
    fail(ErrorCode::InvalidArgument, "belief vector does not match the structure");
  }
  std::vector<NodeId> holders{flow.characters.front()};
  for (std::size_t i = 1; i < flow.characters.size(); ++i) {
    const NodeId next = flow.characters[i];
    const bool known_by_all = std::all_of(holders.begin(), holders.end(), [&](NodeId h) {
      return structure.has_edge(h, next);
    });
    if (known_by_all) holders.push_back(next);
  }
  return beliefs[holders.back()];
}

std::vector<TruthRow> truth_table_k3() {
  constexpr std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
  constexpr std::array<PairState, 3> kStates{PairState::Absent, PairState::Forward,
                                             PairState::Backward};
  std::vector<TruthRow> rows;
  for (PairState a : kStates) {
    for (PairState b : kStates) {
      for (PairState c : kStates) {
        TruthRow row;
        row.pairs = {a, b, c};
        std::vector<Edge> edges;
        for (int p = 0; p < 3; ++p) {
          auto [lo, hi] = kPairs[p];
          if (row.pairs[p] == PairState::Forward) edges.push_back({lo, hi});
          if (row.pairs[p] == PairState::Backward) edges.push_back({hi, lo});
        }
        // Acyclic iff some exit order has every edge pointing backward.
        std::vector<NodeId> order{0, 1, 2};
        std::optional<GraphStructure> dag;
        do {
          GraphStructure candidate(order, edges);
          if (check_acyclic(candidate)) {
            dag.emplace(std::move(candidate));
            break;
          }
        } while (std::next_permutation(order.begin(), order.end()));
        if (!dag) {
          row.cyclic = true;
        } else {
          const std::array<int, 3> beliefs{0, 1, 2};
          row.answer = derive_truth(*dag, beliefs, BeliefFlow{{0, 1, 2}});
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

namespace {

// Literal text of `pattern` strictly between two slots (or pattern ends when
// a slot name is empty).
std::string literal_between(const std::string& pattern, std::string_view from_slot,
                            std::string_view to_slot) {
  std::size_t start = 0;
  if (!from_slot.empty()) {
    start = pattern.find("{" + std::string(from_slot) + "}");
    if (start == std::string::npos) fail(ErrorCode::Internal, "grammar pattern lacks a slot");
    start += from_slot.size() + 2;
  }
  std::size_t end = pattern.size();
  if (!to_slot.empty()) {
    end = pattern.find("{" + std::string(to_slot) + "}", start);
    if (end == std::string::npos) fail(ErrorCode::Internal, "grammar pattern lacks a slot");
  }
  return pattern.substr(start, end - start);
}

int lookup(const std::vector<std::string>& names, std::string_view name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    fail(ErrorCode::ParseError, std::string("replay: unknown ") + what + " '" + std::string(name) + "'");
  }
  return static_cast<int>(it - names.begin());
}

std::string_view strip(std::string_view s, std::string_view prefix, std::string_view suffix) {
  if (!s.starts_with(prefix) || !s.ends_with(suffix) || s.size() < prefix.size() + suffix.size()) {
    fail(ErrorCode::ParseError, "replay: sentence does not fit its frame");
  }
  s.remove_prefix(prefix.size());
  s.remove_suffix(suffix.size());
  return s;
}

}  // namespace

ReplayResult replay_oracle(const SceneInstance& scene, const Grammar& grammar) {
  const int n = static_cast<int>(scene.character_names.size());
  const std::string enter_prefix = literal_between(grammar.enter, "", "names");
  const std::string enter_suffix = literal_between(grammar.enter, "names", "");
  const std::string exit_prefix = literal_between(grammar.exit, "", "c");
  const std::string exit_suffix = literal_between(grammar.exit, "c", "");
  const std::string move_prefix = literal_between(grammar.move, "", "c");
  const std::string move_verb = literal_between(grammar.move, "c", "a");
  const std::string move_to = literal_between(grammar.move, "a", "b");
  const std::string move_suffix = literal_between(grammar.move, "b", "");

  std::vector<std::string_view> lines;
  std::string_view text = scene.text;
  while (!text.empty()) {
    auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.size() < 2) fail(ErrorCode::ParseError, "replay: scene too short");

  ReplayResult result;
  // The initial sentence ends with the container name.
  int location = -1;
  std::size_t best = 0;
  for (int j = 0; j < static_cast<int>(scene.container_names.size()); ++j) {
    const std::string& name = scene.container_names[j];
    if (lines[1].ends_with(name) && name.size() > best) {
      best = name.size();
      location = j;
    }
  }
  if (location < 0) fail(ErrorCode::ParseError, "replay: no initial location");
  result.initial_location = location;

  std::vector<bool> in_room(n, false);
  std::vector<bool> exited(n, false);
  int occupancy = 0;
  result.beliefs.assign(n, -1);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.ends_with(enter_suffix) && line.starts_with(enter_prefix)) {
      std::string_view names = strip(line, enter_prefix, enter_suffix);
      for (;;) {
        const auto sep = names.find(grammar.name_separator);
        const int who = lookup(scene.character_names, names.substr(0, sep), "character");
        if (in_room[who] || exited[who]) fail(ErrorCode::ParseError, "replay: re-entry");
        in_room[who] = true;
        ++occupancy;
        if (sep == std::string_view::npos) break;
        names.remove_prefix(sep + grammar.name_separator.size());
      }
      result.max_occupancy = std::max(result.max_occupancy, occupancy);
    } else if (line.ends_with(exit_suffix) && line.starts_with(exit_prefix) &&
               line.find(move_verb) == std::string_view::npos) {
      const int who = lookup(scene.character_names, strip(line, exit_prefix, exit_suffix), "character");
      if (!in_room[who]) fail(ErrorCode::ParseError, "replay: exit by an absent character");
      in_room[who] = false;
      exited[who] = true;
      --occupancy;
      result.beliefs[who] = location;
      for (int other = 0; other < n; ++other) {
        if (in_room[other]) result.edges.push_back({other, who});
      }
    } else if (auto verb = line.find(move_verb); verb != std::string_view::npos) {
      const std::string_view body = strip(line, move_prefix, move_suffix);
      const std::size_t verb_at = verb - move_prefix.size();
      const int who = lookup(scene.character_names, body.substr(0, verb_at), "character");
      if (!in_room[who]) fail(ErrorCode::ParseError, "replay: move by an absent character");
      const auto to = body.rfind(move_to);
      if (to == std::string_view::npos) fail(ErrorCode::ParseError, "replay: move without target");
      location = lookup(scene.container_names, body.substr(to + move_to.size()), "container");
    } else {
      fail(ErrorCode::ParseError, "replay: unrecognized sentence at line " + std::to_string(i + 1));
    }
  }
  if (occupancy != 0) fail(ErrorCode::ParseError, "replay: room not empty at the end");
  if (std::find(result.beliefs.begin(), result.beliefs.end(), -1) != result.beliefs.end()) {
    fail(ErrorCode::ParseError, "replay: some character never exits");
  }
  std::sort(result.edges.begin(), result.edges.end());
  return result;
}

}  // namespace tomgen
