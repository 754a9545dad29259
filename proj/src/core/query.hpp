#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/belief_graph.hpp"
#include "core/grammar.hpp"
#include "core/rng.hpp"
#include "core/scene.hpp"

namespace tomgen {

/// The character chain named by a k-order query, outermost first.
struct BeliefFlow {
  std::vector<NodeId> characters;

  int order() const { return static_cast<int>(characters.size()); }
  friend bool operator==(const BeliefFlow&, const BeliefFlow&) = default;
};

/// k distinct node ids drawn uniformly without replacement.
BeliefFlow sample_flow(const GraphStructure& structure, int k, Rng& stream);

/// "What does A think B thinks C thinks the apple is in?"
std::string render_query(const BeliefFlow& flow, const SceneInstance& scene,
                         const Grammar& grammar = default_grammar());

/// Throws invalid-flow unless the flow is non-empty with distinct ids valid
/// for an n-node structure.
void validate_flow(const BeliefFlow& flow, int n);

/// Ground-truth container for a flow.
///
/// Holders start as [c'_1]; each following character joins the holders only
/// if every current holder has an edge to it. The answer is the belief of
/// the last holder. This gives b'_1 for k = 1, the edge rule for k = 2, and
/// every acyclic row of the k = 3 truth table.
int derive_truth(const GraphStructure& structure, std::span<const int> beliefs,
                 const BeliefFlow& flow);

enum class PairState { Absent, Forward, Backward };

/// One configuration of the three pairs among c'_1, c'_2, c'_3. Forward on
/// pair (a, b) means an edge c'_a -> c'_b with a < b.
struct TruthRow {
  std::array<PairState, 3> pairs{};  // (1,2), (1,3), (2,3)
  bool cyclic = false;
  std::optional<int> answer;         // 0, 1, 2 for b'_1, b'_2, b'_3
};

/// All 27 configurations, pair (1,2) varying slowest. Cyclic rows carry no
/// answer.
std::vector<TruthRow> truth_table_k3();

struct ReplayResult {
  std::vector<Edge> edges;   // sorted
  std::vector<int> beliefs;  // indexed by node id
  int initial_location = 0;
  int max_occupancy = 0;
};

/// Event simulation over the scene text: tracks who is in the room and where
/// the object is. At each exit the exiting character's belief is the
/// object's location at that moment, and every other occupant gains an edge
/// to the exiter. Names resolve through the scene's own name lists.
ReplayResult replay_oracle(const SceneInstance& scene, const Grammar& grammar = default_grammar());

}  // namespace tomgen
