#include "core/scene.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <variant>

#include "core/counting.hpp"
#include "core/error.hpp"

namespace tomgen {

namespace {

std::string character_placeholder(NodeId v) { return "[c_" + std::to_string(v + 1) + "]"; }
std::string container_placeholder(int j) { return "[b_" + std::to_string(j + 1) + "]"; }
constexpr std::string_view kObjectPlaceholder = "[a]";
constexpr std::string_view kAttributePlaceholder = "[b~]";

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace

SceneTemplate render_template(const CharacterOrder& order, int q, const Grammar& grammar) {
  if (q < 1) fail(ErrorCode::InvalidConfig, "need at least one container");
  SceneTemplate tmpl;
  tmpl.node_count = static_cast<int>(order.steps.size());
  tmpl.container_count = q;

  std::string& text = tmpl.text;
  text = grammar.declare_open;
  for (int j = 0; j < q; ++j) {
    const std::string& pattern = j + 1 < q ? grammar.declare_item : grammar.declare_last;
    text += fill_slots(pattern, {{"b", container_placeholder(j)}});
  }
  text += '\n';
  text += fill_slots(grammar.initial, {{"a", std::string(kObjectPlaceholder)},
                                       {"b", std::string(kAttributePlaceholder)}});
  text += '\n';

  for (const OrderStep& step : order.steps) {
    if (!step.enter.empty()) {
      std::string names;
      for (std::size_t i = 0; i < step.enter.size(); ++i) {
        if (i) names += grammar.name_separator;
        names += character_placeholder(step.enter[i]);
      }
      text += fill_slots(grammar.enter, {{"names", names}});
      text += '\n';
    }
    const std::string out = character_placeholder(step.exit);
    text += fill_slots(grammar.move, {{"c", out},
                                      {"a", std::string(kObjectPlaceholder)},
                                      {"b", std::string(kAttributePlaceholder)}});
    text += '\n';
    text += fill_slots(grammar.exit, {{"c", out}});
    text += '\n';
    tmpl.exit_sequence.push_back(step.exit);
  }
  return tmpl;
}

SceneTemplate render_template(const GraphStructure& structure, int q, const Grammar& grammar) {
  auto order = derive_character_order(structure);
  if (auto* violation = std::get_if<ClosureViolation>(&order)) {
    fail(ErrorCode::ClosureViolation,
         "node " + std::to_string(violation->occupant) + " is in the room when node " +
             std::to_string(violation->exiter) + " exits but holds no edge to it");
  }
  SceneTemplate tmpl = render_template(std::get<CharacterOrder>(order), q, grammar);
  tmpl.structure_id = structure.id();
  return tmpl;
}

PlaceholderCounts count_placeholders(std::string_view text) {
  std::set<std::string> characters, containers;
  PlaceholderCounts counts;
  std::size_t at = 0;
  while ((at = text.find('[', at)) != std::string_view::npos) {
    auto close = text.find(']', at);
    if (close == std::string_view::npos) break;
    std::string token{text.substr(at, close - at + 1)};
    if (token == kAttributePlaceholder) ++counts.attribute_slots;
    else if (token == kObjectPlaceholder) counts.objects = 1;
    else if (token.starts_with("[c_")) characters.insert(token);
    else if (token.starts_with("[b_")) containers.insert(token);
    at = close + 1;
  }
  counts.characters = static_cast<int>(characters.size());
  counts.containers = static_cast<int>(containers.size());
  return counts;
}

std::uint64_t selection_space_size(int n, int q, const SemanticPools& pools) {
  const SemanticCounts c = semantic_expansion_counts(n, q, pools.sizes());
  return static_cast<std::uint64_t>(c.characters * c.containers * c.objects);
}

Selection selection_from_index(std::uint64_t index, int n, int q, const SemanticPools& pools) {
  if (index >= selection_space_size(n, q, pools)) {
    fail(ErrorCode::InvalidArgument, "selection index out of range");
  }
  Selection sel;
  for (const BlockRange& block : partition_pool(static_cast<int>(pools.characters.size()), n)) {
    sel.characters.push_back(block.begin + static_cast<int>(index % block.size()));
    index /= block.size();
  }
  for (const BlockRange& block : partition_pool(static_cast<int>(pools.containers.size()), q)) {
    sel.containers.push_back(block.begin + static_cast<int>(index % block.size()));
    index /= block.size();
  }
  sel.object = static_cast<int>(index);
  return sel;
}

SceneInstance instantiate(const SceneTemplate& tmpl, const SemanticPools& pools,
                          const Selection& selection, Rng& stream) {
  const int n = tmpl.node_count;
  const int q = tmpl.container_count;
  if (static_cast<int>(selection.characters.size()) != n ||
      static_cast<int>(selection.containers.size()) != q) {
    fail(ErrorCode::SelectionOutOfBlock, "selection does not match the template shape");
  }
  const auto char_blocks = partition_pool(static_cast<int>(pools.characters.size()), n);
  const auto cont_blocks = partition_pool(static_cast<int>(pools.containers.size()), q);
  for (int i = 0; i < n; ++i) {
    if (!char_blocks[i].contains(selection.characters[i])) {
      fail(ErrorCode::SelectionOutOfBlock, "character " + std::to_string(i + 1) +
                                               " pick lies outside its block");
    }
  }
  for (int j = 0; j < q; ++j) {
    if (!cont_blocks[j].contains(selection.containers[j])) {
      fail(ErrorCode::SelectionOutOfBlock, "container " + std::to_string(j + 1) +
                                               " pick lies outside its block");
    }
  }
  if (selection.object < 0 || selection.object >= static_cast<int>(pools.objects.size())) {
    fail(ErrorCode::SelectionOutOfBlock, "object pick outside the object pool");
  }

  SceneInstance scene;
  scene.structure_id = tmpl.structure_id;
  for (int i : selection.characters) scene.character_names.push_back(pools.characters[i]);
  for (int j : selection.containers) scene.container_names.push_back(pools.containers[j]);
  scene.object_name = pools.objects[selection.object];

  scene.initial_container = static_cast<int>(stream.below(q));
  scene.beliefs.assign(n, 0);
  std::vector<int> slot_values{scene.initial_container};
  for (NodeId v : tmpl.exit_sequence) {
    scene.beliefs[v] = static_cast<int>(stream.below(q));
    slot_values.push_back(scene.beliefs[v]);
  }

  std::string& out = scene.text;
  out.reserve(tmpl.text.size() + 64);
  std::size_t slot = 0;
  const std::string_view text = tmpl.text;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '[') {
      out += text[i++];
      continue;
    }
    const auto close = text.find(']', i);
    const std::string_view token = text.substr(i, close - i + 1);
    if (token == kAttributePlaceholder) {
      out += scene.container_names[slot_values.at(slot++)];
    } else if (token == kObjectPlaceholder) {
      out += scene.object_name;
    } else {
      const int index = std::stoi(std::string(token.substr(3, token.size() - 4))) - 1;
      out += token[1] == 'c' ? scene.character_names.at(index) : scene.container_names.at(index);
    }
    i = close + 1;
  }
  if (slot != slot_values.size()) fail(ErrorCode::Internal, "attribute slot count mismatch");
  return scene;
}

namespace {

int index_in(const std::vector<std::string>& pool, std::string_view name, const char* what) {
  auto it = std::find(pool.begin(), pool.end(), name);
  if (it == pool.end()) {
    fail(ErrorCode::ParseError, std::string("unknown ") + what + " '" + std::string(name) + "'");
  }
  return static_cast<int>(it - pool.begin());
}

}  // namespace

ParsedScene parse_scene(std::string_view text, const SemanticPools& pools, const Grammar& grammar) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) fail(ErrorCode::ParseError, "scene has fewer than two lines");

  // Container declaration.
  std::vector<std::string> containers;
  {
    std::string_view rest = lines[0];
    if (!rest.starts_with(grammar.declare_open)) {
      fail(ErrorCode::ParseError, "first line is not a container declaration");
    }
    rest.remove_prefix(grammar.declare_open.size());
    while (true) {
      if (auto last = match_slots(grammar.declare_last, rest)) {
        containers.push_back(last->slots.at("b"));
        break;
      }
      auto item = match_slots(grammar.declare_item, rest, true);
      if (!item) fail(ErrorCode::ParseError, "malformed container declaration");
      containers.push_back(item->slots.at("b"));
      rest.remove_prefix(item->consumed);
    }
  }
  const int q = static_cast<int>(containers.size());
  const auto cont_blocks = partition_pool(static_cast<int>(pools.containers.size()), q);
  for (int j = 0; j < q; ++j) {
    if (!cont_blocks[j].contains(index_in(pools.containers, containers[j], "container"))) {
      fail(ErrorCode::ParseError, "container '" + containers[j] + "' is outside block " +
                                      std::to_string(j + 1));
    }
  }
  auto container_index = [&](const std::string& name) {
    auto it = std::find(containers.begin(), containers.end(), name);
    if (it == containers.end()) {
      fail(ErrorCode::ParseError, "container '" + name + "' was not declared");
    }
    return static_cast<int>(it - containers.begin());
  };

  auto initial = match_slots(grammar.initial, lines[1]);
  if (!initial) fail(ErrorCode::ParseError, "second line is not the initial location");
  const std::string object = initial->slots.at("a");
  index_in(pools.objects, object, "object");
  const int initial_container = container_index(initial->slots.at("b"));

  // Events: names are resolved to node ids once n is known.
  std::vector<std::string> room;
  std::vector<std::string> exits;
  std::vector<int> exit_beliefs;
  std::vector<std::vector<std::string>> exit_witnesses;
  std::set<std::string> seen;
  std::size_t i = 2;
  while (i < lines.size()) {
    if (auto enter = match_slots(grammar.enter, lines[i])) {
      std::string_view names = enter->slots.at("names");
      while (true) {
        auto sep = names.find(grammar.name_separator);
        std::string name{names.substr(0, sep)};
        index_in(pools.characters, name, "character");
        if (!seen.insert(name).second) {
          fail(ErrorCode::ParseError, "character '" + name + "' enters twice");
        }
        room.push_back(name);
        if (sep == std::string_view::npos) break;
        names.remove_prefix(sep + grammar.name_separator.size());
      }
      ++i;
    }
    if (i >= lines.size()) fail(ErrorCode::ParseError, "scene ends after an entry sentence");
    auto move = match_slots(grammar.move, lines[i]);
    if (!move) fail(ErrorCode::ParseError, "expected a move sentence at line " + std::to_string(i + 1));
    if (i + 1 >= lines.size()) fail(ErrorCode::ParseError, "move sentence without exit");
    auto exit = match_slots(grammar.exit, lines[i + 1]);
    if (!exit) fail(ErrorCode::ParseError, "expected an exit sentence at line " + std::to_string(i + 2));
    const std::string mover = move->slots.at("c");
    if (exit->slots.at("c") != mover) {
      fail(ErrorCode::ParseError, "'" + mover + "' moves the object but someone else exits");
    }
    if (move->slots.at("a") != object) fail(ErrorCode::ParseError, "move names a different object");
    auto it = std::find(room.begin(), room.end(), mover);
    if (it == room.end()) fail(ErrorCode::ParseError, "'" + mover + "' exits without being in the room");
    room.erase(it);
    exits.push_back(mover);
    exit_beliefs.push_back(container_index(move->slots.at("b")));
    exit_witnesses.push_back(room);
    i += 2;
  }
  if (!room.empty()) fail(ErrorCode::ParseError, "characters remain in the room at the end");
  if (exits.empty()) fail(ErrorCode::ParseError, "scene has no exits");

  const int n = static_cast<int>(exits.size());
  if (n > kMaxNodes || n > static_cast<int>(pools.characters.size())) {
    fail(ErrorCode::ParseError, "too many characters");
  }
  const auto char_blocks = partition_pool(static_cast<int>(pools.characters.size()), n);
  std::map<std::string, NodeId> node_of;
  std::vector<std::string> names(n);
  for (const std::string& name : exits) {
    const int pool_index = index_in(pools.characters, name, "character");
    auto block = std::find_if(char_blocks.begin(), char_blocks.end(),
                              [&](const BlockRange& b) { return b.contains(pool_index); });
    const NodeId id = static_cast<NodeId>(block - char_blocks.begin());
    if (!names[id].empty()) {
      fail(ErrorCode::ParseError, "two characters share pool block " + std::to_string(id + 1));
    }
    names[id] = name;
    node_of[name] = id;
  }

  std::vector<NodeId> exit_order;
  std::vector<Edge> edges;
  std::vector<int> beliefs(n, 0);
  for (int step = 0; step < n; ++step) {
    const NodeId exiter = node_of.at(exits[step]);
    exit_order.push_back(exiter);
    beliefs[exiter] = exit_beliefs[step];
    for (const std::string& witness : exit_witnesses[step]) {
      edges.push_back({node_of.at(witness), exiter});
    }
  }
  return ParsedScene{GraphStructure(std::move(exit_order), std::move(edges)),
                     std::move(beliefs),
                     initial_container,
                     std::move(names),
                     std::move(containers),
                     object};
}

}  // namespace tomgen
