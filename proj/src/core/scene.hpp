#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core/belief_graph.hpp"
#include "core/grammar.hpp"
#include "core/pools.hpp"
#include "core/rng.hpp"

namespace tomgen {

/// Scene text with placeholders: [c_i] characters (1-based node id + 1),
/// [b_j] declared containers, [a] the object, and one [b~] attribute slot
/// for the initial location followed by one per exit, in exit order.
struct SceneTemplate {
  std::string structure_id;
  int node_count = 0;
  int container_count = 0;
  std::vector<NodeId> exit_sequence;
  std::string text;
};

SceneTemplate render_template(const CharacterOrder& order, int q,
                              const Grammar& grammar = default_grammar());

/// Derives the character order first; throws closure-violation if the
/// structure fails the room replay.
SceneTemplate render_template(const GraphStructure& structure, int q,
                              const Grammar& grammar = default_grammar());

struct PlaceholderCounts {
  int characters = 0;        // distinct [c_i]
  int containers = 0;        // distinct [b_j]
  int objects = 0;           // distinct [a]
  int attribute_slots = 0;   // occurrences of [b~]
};

PlaceholderCounts count_placeholders(std::string_view template_text);

/// Absolute pool indices chosen for one scene: character i from character
/// block i, container j from container block j.
struct Selection {
  std::vector<int> characters;
  std::vector<int> containers;
  int object = 0;

  friend bool operator==(const Selection&, const Selection&) = default;
};

/// Size of the per-template cross product: #C(n) * #B(q) * |objects|.
std::uint64_t selection_space_size(int n, int q, const SemanticPools& pools);

/// Mixed-radix decoding of `index` in [0, selection_space_size). Character
/// picks vary fastest, then containers, then the object.
Selection selection_from_index(std::uint64_t index, int n, int q, const SemanticPools& pools);

struct SceneInstance {
  std::string structure_id;
  std::vector<std::string> character_names;  // indexed by node id
  std::vector<std::string> container_names;  // declaration order
  std::string object_name;
  int initial_container = 0;                 // index into container_names
  std::vector<int> beliefs;                  // indexed by node id
  std::string text;
};

/// Fills every placeholder from `selection`; draws the initial location and
/// then each exit's move target, in exit order, uniformly with replacement
/// from the q scene containers using `stream`.
SceneInstance instantiate(const SceneTemplate& tmpl, const SemanticPools& pools,
                          const Selection& selection, Rng& stream);

struct ParsedScene {
  GraphStructure structure;
  std::vector<int> beliefs;
  int initial_container = 0;
  std::vector<std::string> character_names;
  std::vector<std::string> container_names;
  std::string object_name;
};

/// Rebuilds the belief graph from scene text. Node ids come from the pool
/// block each name belongs to; the exit order from exit sentences; edges from
/// who is in the room at each exit; beliefs from move sentences.
ParsedScene parse_scene(std::string_view text, const SemanticPools& pools,
                        const Grammar& grammar = default_grammar());

}  // namespace tomgen
