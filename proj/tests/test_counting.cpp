#include <cmath>

#include "core/belief_graph.hpp"
#include "core/counting.hpp"
#include "core/error.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace tomgen;

namespace {

struct Shape {
  int n, m;
  std::int64_t n_prime, n_total;
};

// Valid-structure reference counts.
const Shape kPublished[] = {{4, 4, 5, 120},    {5, 7, 15, 1800},   {5, 8, 9, 1080},
                            {6, 7, 71, 51120}, {6, 8, 83, 59760}, {6, 9, 82, 59040}};

}  // namespace

TEST_CASE("reference structure counts, both methods") {
  for (const Shape& s : kPublished) {
    CAPTURE(s.n);
    CAPTURE(s.m);
    const CountReport e = count_structures_enumerative(s.n, s.m);
    const CountReport f = count_structures_formula(s.n, s.m);
    CHECK(e.n_prime == s.n_prime);
    CHECK(e.n_total == s.n_total);
    CHECK(f.n_prime == s.n_prime);
    CHECK(f.n_total == s.n_total);
    CHECK(e.method == CountMethod::Enumerative);
    CHECK(f.method == CountMethod::Formula);
  }
}

TEST_CASE("two characters, one edge") {
  CHECK(count_structures_enumerative(2, 1).n_prime == 1);
  CHECK(count_structures_enumerative(2, 1).n_total == 2);
  CHECK(count_structures_formula(2, 1).n_total == 2);
}

TEST_CASE("formula and enumeration agree with brute force on every small shape") {
  for (int n = 2; n <= 5; ++n) {
    for (int m = (n + 1) / 2; m <= n * (n - 1) / 2; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const std::int64_t e = count_structures_enumerative(n, m).n_prime;
      CHECK(count_structures_formula(n, m).n_prime == e);
      CHECK(oracle::interval_count(n, m) == e);
      CHECK(oracle::brute_count(n, m) == e);
    }
  }
}

TEST_CASE("formula and enumeration agree for n = 6, 7") {
  for (int n = 6; n <= 7; ++n) {
    for (int m = (n + 1) / 2; m <= n * (n - 1) / 2; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const std::int64_t e = count_structures_enumerative(n, m).n_prime;
      CHECK(count_structures_formula(n, m).n_prime == e);
      CHECK(oracle::interval_count(n, m) == e);
    }
  }
}

TEST_CASE("formula agrees with the interval oracle for n = 8") {
  for (int m = 4; m <= 28; ++m) {
    CAPTURE(m);
    CHECK(count_structures_formula(8, m).n_prime == oracle::interval_count(8, m));
  }
}

TEST_CASE("total count equals the enumeration length") {
  for (auto [n, m] : {std::pair{4, 4}, {5, 7}, {5, 8}, {3, 2}, {3, 3}}) {
    CHECK(static_cast<std::int64_t>(enumerate_structures(n, m).size()) ==
          count_structures_enumerative(n, m).n_total);
  }
}

TEST_CASE("valid edge sets under the identity order are exactly the interval shapes") {
  for (const GraphStructure& s : enumerate_structures(5, 7)) {
    bool identity = true;
    for (int i = 0; i < 5; ++i) identity = identity && s.exit_order()[i] == i;
    if (!identity) continue;
    std::vector<int> len(5, 0);
    for (const Edge& e : s.edges()) ++len[e.from];
    oracle::EdgeList edges;
    for (const Edge& e : s.edges()) edges.push_back({e.from, e.to});
    CHECK(oracle::interval_edges(len) == edges);
  }
}

TEST_CASE("counting rejects bad shapes") {
  CHECK_THROWS_AS(count_structures_formula(4, 1), Error);
  CHECK_THROWS_AS(count_structures_enumerative(4, 7), Error);
  CHECK_THROWS_AS(count_structures_formula(9, 10), Error);
}

TEST_CASE("factorial and binomial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(6) == 720);
  CHECK(binomial(6, 2) == 15);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 4) == 0);
}

TEST_CASE("block products") {
  CHECK(block_product(12, 4) == 81);
  CHECK(block_product(12, 5) == 72);
  CHECK(block_product(12, 6) == 64);
  CHECK(block_product(10, 3) == 36);
  CHECK(block_product(10, 4) == 36);
}

TEST_CASE("semantic counts") {
  const SemanticCounts c = semantic_expansion_counts(4, 3);
  CHECK(c.characters == 81);
  CHECK(c.containers == 36);
  CHECK(c.objects == 4);
  CHECK(semantic_expansion_counts(6, 4).characters == 64);
  CHECK(semantic_expansion_counts(6, 4).containers == 36);
}

TEST_CASE("reference dataset sizes") {
  struct Row {
    int n, m, q;
    std::int64_t train, test;
  };
  const Row rows[] = {
      {4, 4, 3, 1306368, 93312}, {4, 4, 4, 1306368, 93312}, {5, 7, 3, 1161216, 82944},
      {5, 7, 4, 1161216, 82944}, {5, 8, 3, 1161216, 82944}, {5, 8, 4, 1161216, 82944},
      {6, 7, 3, 1032192, 73728}, {6, 7, 4, 1032192, 73728}, {6, 8, 3, 1032192, 73728},
      {6, 8, 4, 1032192, 73728}, {6, 9, 3, 1032192, 73728}, {6, 9, 4, 1032192, 73728},
  };
  for (const Row& r : rows) {
    const DatasetSize s = dataset_size(r.n, r.m, r.q);
    CHECK(s.train == r.train);
    CHECK(s.test == r.test);
    CHECK(s.total == r.train + r.test);
  }
}

TEST_CASE("dataset size needs enough structures") {
  // (3,2) has 3! * 2 = 12 structures.
  CHECK_THROWS_AS(dataset_size(3, 2, 3), Error);
  CHECK_NOTHROW(dataset_size(3, 2, 3, 12, 10));
  CHECK(dataset_size(4, 4, 3, 120, 112, {}, 2).train == 2 * 1306368);
}

TEST_CASE("density") {
  CHECK(graph_density(6, 7) == doctest::Approx(0.4667).epsilon(1e-3));
  CHECK(graph_density(4, 4) == doctest::Approx(0.6667).epsilon(1e-3));
  CHECK(graph_density(5, 10) == 1.0);
  CHECK(graph_density(6, 15) == 1.0);
}
