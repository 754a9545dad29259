#include "core/counting.hpp"

#include <bit>
#include <map>
#include <utility>
#include <vector>

#include "core/belief_graph.hpp"
#include "core/error.hpp"

namespace tomgen {

std::string_view to_string(CountMethod method) {
  return method == CountMethod::Enumerative ? "enumerative" : "formula";
}

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

CountReport count_structures_enumerative(int n, int m) {
  validate_shape(n, m);
  std::vector<NodeId> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<Edge> candidates;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) candidates.push_back({j, i});
  }
  const int total = static_cast<int>(candidates.size());
  const std::uint32_t all_nodes = (1u << n) - 1;

  std::int64_t count = 0;
  std::vector<std::uint32_t> parents(n);
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << total); ++subset) {
    if (std::popcount(subset) != m) continue;
    std::fill(parents.begin(), parents.end(), 0u);
    std::uint32_t touched = 0;
    for (int b = 0; b < total; ++b) {
      if ((subset >> b) & 1u) {
        parents[candidates[b].to] |= 1u << candidates[b].from;
        touched |= (1u << candidates[b].from) | (1u << candidates[b].to);
      }
    }
    if (touched == all_nodes && room_closure_holds(order, parents)) ++count;
  }
  return {n, m, count, factorial(n) * count, CountMethod::Enumerative};
}

namespace {

// Structures under the canonical order in which every node of `isolated`
// has no edge at all (other nodes unconstrained).
//
// Position v (0-based) exits v-th; its candidate parents are the later nodes
// V>v. State: s = occupants other than v already in the room (all must be
// parents of v), rem = edges still to place. Choosing r = |P(v)| >= s admits
// r - s new parents out of the |V>v| - s - |X>v| candidates not yet present.
// The room after v is P(v); whether it contains v+1 decides the next s. By
// symmetry among not-yet-exited nodes, P(v) is a uniform r-subset of the
// |V>v \ X| eligible nodes, so exactly r/|V>v \ X| of the weight has v+1 in
// the room.
std::int64_t count_with_isolated(int n, int m, std::uint32_t isolated) {
  std::map<std::pair<int, int>, std::int64_t> states{{{0, m}, 1}};
  for (int v = 0; v < n; ++v) {
    const std::uint32_t later = ((1u << n) - 1) & ~((2u << v) - 1);
    const int eligible = std::popcount(later & ~isolated);
    const bool next_eligible = v + 1 < n && !((isolated >> (v + 1)) & 1u);
    std::map<std::pair<int, int>, std::int64_t> next;
    for (const auto& [key, weight] : states) {
      const auto [s, rem] = key;
      if ((isolated >> v) & 1u) {
        if (s == 0) next[{0, rem}] += weight;
        continue;
      }
      for (int r = s; r <= eligible && r <= rem; ++r) {
        const std::int64_t w = weight * binomial(eligible - s, r - s);
        if (w == 0) continue;
        if (next_eligible && r > 0) {
          const std::int64_t with_next = w * r / eligible;
          next[{r - 1, rem - r}] += with_next;
          if (w - with_next) next[{r, rem - r}] += w - with_next;
        } else {
          next[{r, rem - r}] += w;
        }
      }
    }
    states = std::move(next);
  }
  auto it = states.find({0, 0});
  return it == states.end() ? 0 : it->second;
}

}  // namespace

CountReport count_structures_formula(int n, int m) {
  validate_shape(n, m);
  std::int64_t count = 0;
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    const std::int64_t term = count_with_isolated(n, m, x);
    count += (std::popcount(x) % 2 == 0) ? term : -term;
  }
  return {n, m, count, factorial(n) * count, CountMethod::Formula};
}

std::int64_t block_product(int pool_size, int parts) {
  if (parts < 1 || parts > pool_size) {
    fail(ErrorCode::InvalidConfig, "cannot split a pool of " + std::to_string(pool_size) +
                                       " into " + std::to_string(parts) + " blocks");
  }
  std::int64_t product = 1;
  for (int i = 1; i <= parts; ++i) {
    product *= (pool_size * i) / parts - (pool_size * (i - 1)) / parts;
  }
  return product;
}

SemanticCounts semantic_expansion_counts(int n, int q, const PoolSizes& pools) {
  if (pools.objects < 1) fail(ErrorCode::InvalidConfig, "object pool is empty");
  return {block_product(pools.characters, n), block_product(pools.containers, q),
          pools.objects};
}

DatasetSize dataset_size(int n, int m, int q, int structure_cap, int train_structures,
                         const PoolSizes& pools, int samples_per_scene) {
  validate_shape(n, m);
  if (structure_cap < 1 || train_structures < 0 || train_structures > structure_cap) {
    fail(ErrorCode::InvalidConfig, "need 0 <= train_structures <= structure_cap");
  }
  if (samples_per_scene < 1) fail(ErrorCode::InvalidConfig, "samples_per_scene must be >= 1");
  const std::int64_t population = count_structures_formula(n, m).n_total;
  if (population < structure_cap) {
    fail(ErrorCode::CapExceedsPopulation,
         "structure cap " + std::to_string(structure_cap) + " exceeds N(" +
             std::to_string(n) + "," + std::to_string(m) + ")=" + std::to_string(population));
  }
  const SemanticCounts sc = semantic_expansion_counts(n, q, pools);
  const std::int64_t per_structure =
      sc.objects * sc.characters * sc.containers * samples_per_scene;
  return {per_structure * structure_cap, per_structure * train_structures,
          per_structure * (structure_cap - train_structures)};
}

double graph_density(int n, int m) {
  if (n < 2) fail(ErrorCode::InvalidConfig, "density needs n >= 2");
  return 2.0 * m / (static_cast<double>(n) * (n - 1));
}

}  // namespace tomgen
