#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphfam/graph.hpp"

namespace graphfam {

// Generator settings for planted-family corpora. Defaults are sized for
// desk-scale runs that finish in seconds.
struct SynthConfig {
  int families = 8;
  std::pair<int, int> family_size_range{3, 10};
  std::pair<int, int> base_order_range{30, 80};
  double edge_factor = 2.1;        // edges ~ factor * order
  double external_fraction = 0.25;
  int mutations_per_generation = 3;
  // When set, each member mutates the previous one instead of the family
  // base, so late generations drift away from generation zero.
  bool generational = false;
  std::uint64_t seed = 0;

  void validate() const;
};

// Per-sample bookkeeping for tests: the edit cost of the operations that
// produced the sample, an upper bound on its true edit distance from the
// family base.
struct SynthSampleTrace {
  std::string label;
  std::string family;
  std::int64_t edit_bound_from_base = 0;
};

// Generates one base graph per family and derives members by random edit
// operations (vertex insert/delete, edge insert/delete, external relabel).
// Every member gets fresh local names. Deterministic for a given config.
GraphCorpus generate_corpus(const SynthConfig& cfg);
GraphCorpus generate_corpus(const SynthConfig& cfg, std::vector<SynthSampleTrace>* trace);

// Copy of a graph with every local function renamed to a fresh unique name;
// structure and externals unchanged.
CallGraph rename_locals(const CallGraph& graph, std::uint64_t seed, std::string new_label);

}  // namespace graphfam
