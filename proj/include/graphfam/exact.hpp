#pragma once

#include "graphfam/matching.hpp"

namespace graphfam {

// Combined-order ceiling under which exhaustive matching is the default.
inline constexpr int kDefaultExactOrderLimit = 12;

// Enumerates every bijection over the augmented vertex sets and returns a
// matching with the true minimum edit cost. Intended as the ground-truth
// oracle for small instances; throws Error when
// |V(G)| + |V(H)| > max_order.
SimilarityScore exact_min_ged(const CallGraph& g, const CallGraph& h,
                              int max_order = kDefaultExactOrderLimit);

}  // namespace graphfam
