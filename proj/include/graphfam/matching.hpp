#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphfam/graph.hpp"

namespace graphfam {

// Sentinel for the dummy vertex: matching a real vertex to it encodes a
// deletion (left side) or insertion (right side).
inline constexpr int kDummyVertex = -1;

struct MatchPair {
  int left = kDummyVertex;
  int right = kDummyVertex;

  bool operator==(const MatchPair&) const = default;
};

// A bijection between the dummy-augmented vertex sets of two graphs.
// Dummy-dummy pairs carry no information and are never stored.
struct Matching {
  std::string left_label;
  std::string right_label;
  std::vector<MatchPair> pairs;
};

struct CostBreakdown {
  std::int64_t vertex_cost = 0;
  std::int64_t edge_cost = 0;
  std::int64_t relabel_cost = 0;
  std::int64_t total = 0;

  bool operator==(const CostBreakdown&) const = default;
};

struct SimilarityScore {
  double sigma = 0.0;
  CostBreakdown cost;
  Matching matching;
};

// Throws Error unless `m` is a bijection over the augmented vertex sets of
// g and h: each real id on either side appears exactly once, all ids are in
// range, and no pair is dummy-dummy.
void validate_matching(const Matching& m, const CallGraph& g, const CallGraph& h);

// Number of pairs with exactly one dummy side (deletions plus insertions).
std::int64_t vertex_cost(const Matching& m);

// |E(G)| + |E(H)| minus twice the number of edges of G whose images under
// the matching are edges of H; pairs with a dummy image never preserve.
std::int64_t edge_cost(const Matching& m, const CallGraph& g, const CallGraph& h);

// Counts every external vertex matched to a non-dummy partner that is not an
// identically named external. A mismatched external pair costs 2, an
// external matched to a local costs 1, locals cost nothing.
std::int64_t relabel_cost(const Matching& m, const CallGraph& g, const CallGraph& h);

// All three costs and their sum for a given matching.
CostBreakdown edit_distance(const Matching& m, const CallGraph& g, const CallGraph& h);

// Normalized edit cost: total / (|V(G)| + |V(H)| + |E(G)| + |E(H)|).
// Defined as 0 when both graphs are null.
double similarity(const CostBreakdown& cost, const CallGraph& g, const CallGraph& h);

// Two-column debug format: `left right` per line, `-` for dummies.
std::string matching_to_text(const Matching& m);

}  // namespace graphfam
