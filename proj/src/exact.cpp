#include "graphfam/exact.hpp"

#include <limits>
#include <string>
#include <vector>

namespace graphfam {

namespace {

// Depth-first enumeration of all injective partial maps V(G) -> V(H); left
// vertices not mapped to a real right vertex are deletions, uncovered right
// vertices are insertions. Vertex and relabel costs accumulate along the
// path; preserved edges are counted as soon as both endpoints are assigned.
struct ExactSearch {
  const CallGraph& g;
  const CallGraph& h;
  std::vector<int> phi;       // current assignment, kDummyVertex for deletion
  std::vector<bool> used;     // right vertices already taken
  std::vector<int> best_phi;
  std::int64_t best_total = std::numeric_limits<std::int64_t>::max();

  ExactSearch(const CallGraph& g_, const CallGraph& h_) : g(g_), h(h_) {
    phi.assign(static_cast<size_t>(g.order()), kDummyVertex);
    used.assign(static_cast<size_t>(h.order()), false);
    best_phi = phi;
  }

  static std::int64_t pair_label_cost(const Vertex& lv, const Vertex& rv) {
    const bool lext = lv.kind == FunctionKind::External;
    const bool rext = rv.kind == FunctionKind::External;
    const bool matched = lext && rext && lv.name == rv.name;
    return static_cast<std::int64_t>(lext && !matched) + static_cast<std::int64_t>(rext && !matched);
  }

  // Preserved edges newly determined by assigning u -> phi[u], i.e. edges
  // between u and vertices assigned earlier (including the self loop).
  std::int64_t newly_preserved(int u) const {
    if (phi[static_cast<size_t>(u)] == kDummyVertex) return 0;
    std::int64_t preserved = 0;
    for (int w : g.out_neighbors(u)) {
      if (w > u) continue;
      int img = phi[static_cast<size_t>(w)];
      if (img != kDummyVertex && h.has_edge(phi[static_cast<size_t>(u)], img)) ++preserved;
    }
    for (int w : g.in_neighbors(u)) {
      if (w >= u) continue;  // self loop already counted above
      int img = phi[static_cast<size_t>(w)];
      if (img != kDummyVertex && h.has_edge(img, phi[static_cast<size_t>(u)])) ++preserved;
    }
    return preserved;
  }

  void run(int u, std::int64_t vr_cost, std::int64_t preserved) {
    if (u == g.order()) {
      std::int64_t insertions = 0;
      for (bool taken : used) {
        if (!taken) ++insertions;
      }
      const std::int64_t edge_total =
          static_cast<std::int64_t>(g.size()) + h.size() - 2 * preserved;
      const std::int64_t total = vr_cost + insertions + edge_total;
      if (total < best_total) {
        best_total = total;
        best_phi = phi;
      }
      return;
    }
    for (int v = 0; v < h.order(); ++v) {
      if (used[static_cast<size_t>(v)]) continue;
      used[static_cast<size_t>(v)] = true;
      phi[static_cast<size_t>(u)] = v;
      run(u + 1, vr_cost + pair_label_cost(g.vertex(u), h.vertex(v)),
          preserved + newly_preserved(u));
      phi[static_cast<size_t>(u)] = kDummyVertex;
      used[static_cast<size_t>(v)] = false;
    }
    run(u + 1, vr_cost + 1, preserved);  // delete u
  }
};

}  // namespace

SimilarityScore exact_min_ged(const CallGraph& g, const CallGraph& h, int max_order) {
  const int combined = g.order() + h.order();
  if (combined > max_order) {
    throw Error("exact matcher limited to combined order " + std::to_string(max_order) +
                ", got " + std::to_string(combined));
  }

  ExactSearch search(g, h);
  search.run(0, 0, 0);

  Matching m;
  m.left_label = g.label();
  m.right_label = h.label();
  std::vector<bool> covered(static_cast<size_t>(h.order()), false);
  for (int u = 0; u < g.order(); ++u) {
    int v = search.best_phi[static_cast<size_t>(u)];
    m.pairs.push_back({u, v});
    if (v != kDummyVertex) covered[static_cast<size_t>(v)] = true;
  }
  for (int v = 0; v < h.order(); ++v) {
    if (!covered[static_cast<size_t>(v)]) m.pairs.push_back({kDummyVertex, v});
  }

  SimilarityScore score;
  score.cost = edit_distance(m, g, h);
  score.sigma = similarity(score.cost, g, h);
  score.matching = std::move(m);
  return score;
}

}  // namespace graphfam
