#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tomgen {

using NodeId = int;

/// Largest supported character count. Adjacency is kept in 64-bit masks.
inline constexpr int kMaxNodes = 8;

/// (from, to): `from` holds a true belief about `to`.
struct Edge {
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A labeled belief graph together with the order in which its characters
/// leave the room. Edges are stored sorted. Construction checks only that ids
/// are in range, the order is a permutation, and there are no self loops or
/// duplicates; acyclicity and the other validity conditions are separate
/// predicates so that invalid graphs can still be represented and rejected.
class GraphStructure {
 public:
  GraphStructure(std::vector<NodeId> exit_order, std::vector<Edge> edges);

  int node_count() const { return static_cast<int>(exit_order_.size()); }
  std::span<const NodeId> exit_order() const { return exit_order_; }
  std::span<const Edge> edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool has_edge(NodeId from, NodeId to) const;
  std::uint32_t parent_mask(NodeId v) const { return parents_[v]; }
  std::vector<NodeId> parents(NodeId v) const;
  int exit_position(NodeId v) const { return position_[v]; }

  /// "n=4;order=0,1,2,3;edges=1>0,2>0,..." (edges sorted).
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  const std::string& id() const { return id_; }

  friend bool operator==(const GraphStructure& a, const GraphStructure& b) {
    return a.exit_order_ == b.exit_order_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<NodeId> exit_order_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> parents_;
  std::vector<int> position_;
  std::string id_;
};

struct OrderStep {
  std::vector<NodeId> enter;
  NodeId exit = 0;

  friend bool operator==(const OrderStep&, const OrderStep&) = default;
};

/// Entrance/exit events, one step per character in exit order.
struct CharacterOrder {
  std::vector<OrderStep> steps;

  friend bool operator==(const CharacterOrder&, const CharacterOrder&) = default;
};

/// `occupant` was in the room when `exiter` left but holds no edge to it.
struct ClosureViolation {
  NodeId occupant = 0;
  NodeId exiter = 0;
};

bool check_acyclic(const GraphStructure& structure);
bool check_no_isolated(const GraphStructure& structure);

/// Replays the exit order with a room list. At each step the exiting
/// character enters if absent, together with every absent parent; every
/// other occupant must then be a parent of the exiting character.
std::variant<CharacterOrder, ClosureViolation> derive_character_order(
    const GraphStructure& structure);

/// Mask form of the closure replay. `parents[v]` is the parent mask of v.
bool room_closure_holds(std::span<const NodeId> exit_order,
                        std::span<const std::uint32_t> parents);

/// Throws invalid-config unless 2 <= n <= kMaxNodes and
/// ceil(n/2) <= m <= n(n-1)/2.
void validate_shape(int n, int m);

/// Every valid structure over all n! exit orders, ordered by exit order and
/// then by sorted edge list. Work is split across `workers` threads; the
/// result does not depend on the worker count.
std::vector<GraphStructure> enumerate_structures(int n, int m, int workers = 1);

}  // namespace tomgen
