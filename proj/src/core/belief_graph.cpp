#include "core/belief_graph.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <numeric>
#include <thread>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace tomgen {

GraphStructure::GraphStructure(std::vector<NodeId> exit_order, std::vector<Edge> edges)
    : exit_order_(std::move(exit_order)), edges_(std::move(edges)) {
  const int n = node_count();
  if (n < 1 || n > kMaxNodes) {
    fail(ErrorCode::InvalidArgument, "node count " + std::to_string(n) + " out of range");
  }
  position_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    NodeId v = exit_order_[i];
    if (v < 0 || v >= n || position_[v] != -1) {
      fail(ErrorCode::InvalidArgument, "exit order is not a permutation of 0..n-1");
    }
    position_[v] = i;
  }
  std::sort(edges_.begin(), edges_.end());
  parents_.assign(n, 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
    }
    if (e.from == e.to) fail(ErrorCode::InvalidArgument, "self loop");
    if (i > 0 && edges_[i - 1] == e) fail(ErrorCode::InvalidArgument, "duplicate edge");
    parents_[e.to] |= 1u << e.from;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical())));
  id_ = buf;
}

bool GraphStructure::has_edge(NodeId from, NodeId to) const {
  return (parents_[to] >> from) & 1u;
}

std::vector<NodeId> GraphStructure::parents(NodeId v) const {
  std::vector<NodeId> out;
  for (int u = 0; u < node_count(); ++u) {
    if (has_edge(u, v)) out.push_back(u);
  }
  return out;
}

std::string GraphStructure::canonical() const {
  std::string s = "n=" + std::to_string(node_count()) + ";order=";
  for (int i = 0; i < node_count(); ++i) {
    if (i) s += ',';
    s += std::to_string(exit_order_[i]);
  }
  s += ";edges=";
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(edges_[i].from) + '>' + std::to_string(edges_[i].to);
  }
  return s;
}

bool check_acyclic(const GraphStructure& structure) {
  for (const Edge& e : structure.edges()) {
    if (structure.exit_position(e.from) <= structure.exit_position(e.to)) return false;
  }
  return true;
}

bool check_no_isolated(const GraphStructure& structure) {
  std::uint32_t touched = 0;
  for (const Edge& e : structure.edges()) touched |= (1u << e.from) | (1u << e.to);
  return touched == (1u << structure.node_count()) - 1;
}

std::variant<CharacterOrder, ClosureViolation> derive_character_order(
    const GraphStructure& structure) {
  CharacterOrder order;
  std::vector<NodeId> room;
  auto present = [&room](NodeId v) {
    return std::find(room.begin(), room.end(), v) != room.end();
  };
  for (NodeId node : structure.exit_order()) {
    OrderStep step;
    if (!present(node)) step.enter.push_back(node);
    for (NodeId p : structure.parents(node)) {
      if (!present(p)) step.enter.push_back(p);
    }
    for (NodeId v : step.enter) {
      if (!present(v)) room.push_back(v);
    }
    for (NodeId occupant : room) {
      if (occupant != node && !structure.has_edge(occupant, node)) {
        return ClosureViolation{occupant, node};
      }
    }
    room.erase(std::find(room.begin(), room.end(), node));
    step.exit = node;
    order.steps.push_back(std::move(step));
  }
  return order;
}

bool room_closure_holds(std::span<const NodeId> exit_order,
                        std::span<const std::uint32_t> parents) {
  std::uint32_t room = 0;
  for (NodeId node : exit_order) {
    const std::uint32_t self = 1u << node;
    room |= self | parents[node];
    if ((room & ~self & ~parents[node]) != 0) return false;
    room &= ~self;
  }
  return true;
}

void validate_shape(int n, int m) {
  if (n < 2 || n > kMaxNodes) {
    fail(ErrorCode::InvalidConfig,
         "n must be in [2, " + std::to_string(kMaxNodes) + "], got " + std::to_string(n));
  }
  const int max_edges = n * (n - 1) / 2;
  const int min_edges = (n + 1) / 2;
  if (m > max_edges) {
    fail(ErrorCode::InvalidConfig, "m=" + std::to_string(m) + " exceeds C(n,2)=" +
                                       std::to_string(max_edges));
  }
  if (m < min_edges) {
    fail(ErrorCode::InvalidConfig, "m=" + std::to_string(m) + " < ceil(n/2)=" +
                                       std::to_string(min_edges) +
                                       ": some node would be isolated");
  }
}

namespace {

// All valid edge sets for one exit order, sorted by edge list.
std::vector<GraphStructure> structures_for_order(const std::vector<NodeId>& order, int m) {
  const int n = static_cast<int>(order.size());
  std::vector<Edge> candidates;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) candidates.push_back({order[j], order[i]});
  }
  const int total = static_cast<int>(candidates.size());
  const std::uint32_t all_nodes = (1u << n) - 1;

  std::vector<GraphStructure> out;
  std::vector<std::uint32_t> parents(n);
  // Gosper's hack walks every m-subset of the candidate list.
  std::uint64_t subset = (std::uint64_t{1} << m) - 1;
  const std::uint64_t end = std::uint64_t{1} << total;
  while (subset < end) {
    std::fill(parents.begin(), parents.end(), 0u);
    std::uint32_t touched = 0;
    for (std::uint64_t bits = subset; bits; bits &= bits - 1) {
      const Edge& e = candidates[std::countr_zero(bits)];
      parents[e.to] |= 1u << e.from;
      touched |= (1u << e.from) | (1u << e.to);
    }
    if (touched == all_nodes && room_closure_holds(order, parents)) {
      std::vector<Edge> edges;
      edges.reserve(m);
      for (std::uint64_t bits = subset; bits; bits &= bits - 1) {
        edges.push_back(candidates[std::countr_zero(bits)]);
      }
      out.emplace_back(order, std::move(edges));
    }
    const std::uint64_t c = subset & (~subset + 1);
    const std::uint64_t r = subset + c;
    subset = (((r ^ subset) >> 2) / c) | r;
  }
  std::sort(out.begin(), out.end(), [](const GraphStructure& a, const GraphStructure& b) {
    return std::lexicographical_compare(a.edges().begin(), a.edges().end(),
                                        b.edges().begin(), b.edges().end());
  });
  return out;
}

}  // namespace

std::vector<GraphStructure> enumerate_structures(int n, int m, int workers) {
  validate_shape(n, m);

  std::vector<std::vector<NodeId>> orders;
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    orders.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::vector<GraphStructure>> per_order(orders.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < orders.size(); i = next++) {
      per_order[i] = structures_for_order(orders[i], m);
    }
  };
  const int threads = std::clamp(workers, 1, static_cast<int>(orders.size()));
  std::vector<std::jthread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  pool.clear();

  std::vector<GraphStructure> all;
  for (auto& block : per_order) {
    for (auto& s : block) all.push_back(std::move(s));
  }
  return all;
}

}  // namespace tomgen
