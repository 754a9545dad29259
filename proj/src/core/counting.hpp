#pragma once

#include <cstdint>
#include <string_view>

namespace tomgen {

enum class CountMethod { Enumerative, Formula };

std::string_view to_string(CountMethod method);

struct CountReport {
  int n = 0;
  int m = 0;
  std::int64_t n_prime = 0;  // valid structures under one fixed exit order
  std::int64_t n_total = 0;  // n! * n_prime
  CountMethod method = CountMethod::Enumerative;
};

std::int64_t factorial(int n);
std::int64_t binomial(int n, int k);

/// Enumerates every m-subset of backward edges under the canonical order and
/// keeps those with no isolated node that pass the room closure replay.
CountReport count_structures_enumerative(int n, int m);

/// Inclusion-exclusion over forced-isolated node sets X, each term a dynamic
/// program over (position, room size, remaining edges) whose per-step weight
/// is the number of ways to pick the newly admitted parents.
CountReport count_structures_formula(int n, int m);

struct PoolSizes {
  int characters = 12;
  int containers = 10;
  int objects = 4;
};

/// Product of block sizes when `pool_size` entries are cut into `parts`
/// floor-boundary blocks.
std::int64_t block_product(int pool_size, int parts);

struct SemanticCounts {
  std::int64_t characters = 0;  // #C(n)
  std::int64_t containers = 0;  // #B(q)
  std::int64_t objects = 0;     // |L_A|
};

SemanticCounts semantic_expansion_counts(int n, int q, const PoolSizes& pools = {});

struct DatasetSize {
  std::int64_t total = 0;
  std::int64_t train = 0;
  std::int64_t test = 0;
};

/// Record counts for one experimental group. The structure population N(n,m)
/// must be at least `structure_cap`; only `structure_cap` structures are used,
/// `train_structures` of them for training and the rest held out.
DatasetSize dataset_size(int n, int m, int q, int structure_cap = 120,
                         int train_structures = 112, const PoolSizes& pools = {},
                         int samples_per_scene = 1);

/// 2m / (n(n-1)).
double graph_density(int n, int m);

}  // namespace tomgen
