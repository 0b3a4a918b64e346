#include <doctest.h>

#include <random>

#include "graphfam/exact.hpp"
#include "test_util.hpp"

using namespace graphfam;
using testutil::make_graph;
using testutil::null_graph;

TEST_CASE("exact matcher finds zero for a graph against itself") {
  const CallGraph g = make_graph(
      "g", {{"a", 'l'}, {"b", 'l'}, {"CreateFileA", 'e'}}, {{0, 1}, {1, 2}, {0, 0}});
  const SimilarityScore score = exact_min_ged(g, g);
  CHECK(score.cost.total == 0);
  CHECK(score.sigma == 0.0);
}

TEST_CASE("order-2 vs order-1 instance has minimum total 2") {
  // hand enumeration: map a->c and delete b => vertex 1 + edge 1 = 2;
  // map b->c => same; all-dummy => vertex 3 + edge 1 = 4. Minimum is 2.
  const CallGraph g = make_graph("g", {{"a", 'l'}, {"b", 'l'}}, {{0, 1}});
  const CallGraph h = make_graph("h", {{"c", 'l'}}, {});
  const SimilarityScore score = exact_min_ged(g, h);
  CHECK(score.cost.total == 2);
  CHECK(score.sigma == doctest::Approx(0.5));
  CHECK(vertex_cost(score.matching) == 1);
}

TEST_CASE("isomorphic graphs with permuted local names score zero") {
  const CallGraph g = make_graph(
      "g", {{"a", 'l'}, {"b", 'l'}, {"c", 'l'}}, {{0, 1}, {1, 2}});
  const CallGraph h = make_graph(
      "h", {{"z", 'l'}, {"x", 'l'}, {"y", 'l'}}, {{1, 2}, {2, 0}});  // same shape, relabeled
  const SimilarityScore score = exact_min_ged(g, h);
  CHECK(score.cost.total == 0);
  CHECK(score.sigma == 0.0);
}

TEST_CASE("null graph cases") {
  const CallGraph g = make_graph("g", {{"a", 'l'}, {"X", 'e'}}, {{0, 1}});
  CHECK(exact_min_ged(g, null_graph()).sigma == 1.0);
  CHECK(exact_min_ged(null_graph(), g).sigma == 1.0);
  CHECK(exact_min_ged(null_graph("a"), null_graph("b")).sigma == 0.0);
}

TEST_CASE("combined order above the limit is rejected") {
  std::mt19937_64 rng(3);
  const CallGraph g = testutil::random_graph(rng, "g", 7);
  const CallGraph h = testutil::random_graph(rng, "h", 6);
  CHECK_THROWS_AS(exact_min_ged(g, h, 12), Error);
  CHECK_NOTHROW(exact_min_ged(g, h, 13));
}

TEST_CASE("returned matching is always valid and consistent with the cost") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const CallGraph g = testutil::random_graph(rng, "g", static_cast<int>(rng() % 7));
    const CallGraph h = testutil::random_graph(rng, "h", static_cast<int>(rng() % 6));
    const SimilarityScore score = exact_min_ged(g, h);
    CHECK_NOTHROW(validate_matching(score.matching, g, h));
    CHECK(edit_distance(score.matching, g, h) == score.cost);
    CHECK(score.sigma >= 0.0);
    CHECK(score.sigma <= 1.0);
  }
}

TEST_CASE("exact minimum is symmetric in its arguments") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const CallGraph g = testutil::random_graph(rng, "g", 2 + static_cast<int>(rng() % 5));
    const CallGraph h = testutil::random_graph(rng, "h", 2 + static_cast<int>(rng() % 5));
    CHECK(exact_min_ged(g, h).cost.total == exact_min_ged(h, g).cost.total);
  }
}
