#pragma once

#include <cstdint>
#include <optional>

#include "graphfam/exact.hpp"
#include "graphfam/matching.hpp"

namespace graphfam {

struct AnnealConfig {
  // Multiplied by the initial matching cost, so the start of the schedule
  // accepts most uphill moves regardless of graph size.
  double initial_temperature = 1.0;
  double cooling_factor = 0.95;
  // Moves tried per temperature level; defaults to 8x the number of free
  // (unpinned) slots when unset.
  std::optional<std::uint32_t> steps_per_temperature;
  double minimum_temperature = 1e-3;
  std::uint32_t restarts = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

// Two-stage matcher: externals with identical names are pinned one-to-one,
// then simulated annealing over swap moves minimizes the edit cost of the
// remaining assignment. Deterministic for a given seed; the result is never
// worse than the seeded starting assignment.
SimilarityScore anneal_match(const CallGraph& g, const CallGraph& h,
                             const AnnealConfig& cfg = {});

// Published pairwise score: exact for small combined order, otherwise the
// smaller of the two annealed directions, which makes the score exactly
// symmetric in its arguments.
double pair_similarity(const CallGraph& g, const CallGraph& h, const AnnealConfig& cfg,
                       int exact_threshold = kDefaultExactOrderLimit);

}  // namespace graphfam
