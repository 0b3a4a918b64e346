#include "graphfam/matching.hpp"

#include <algorithm>
#include <string>

namespace graphfam {

namespace {

// phi[left id] = right id or kDummyVertex; inverse for psi.
struct MatchingView {
  std::vector<int> phi;
  std::vector<int> psi;
};

MatchingView build_view(const Matching& m, int left_order, int right_order) {
  MatchingView view;
  view.phi.assign(static_cast<size_t>(left_order), kDummyVertex);
  view.psi.assign(static_cast<size_t>(right_order), kDummyVertex);
  for (const MatchPair& p : m.pairs) {
    if (p.left != kDummyVertex) view.phi[static_cast<size_t>(p.left)] = p.right;
    if (p.right != kDummyVertex) view.psi[static_cast<size_t>(p.right)] = p.left;
  }
  return view;
}

void check_bijection_shape(const Matching& m) {
  std::vector<int> lefts, rights;
  for (const MatchPair& p : m.pairs) {
    if (p.left == kDummyVertex && p.right == kDummyVertex) {
      throw Error("invalid matching: dummy-dummy pair");
    }
    if (p.left != kDummyVertex) lefts.push_back(p.left);
    if (p.right != kDummyVertex) rights.push_back(p.right);
  }
  auto has_dup = [](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  if (has_dup(lefts) || has_dup(rights)) {
    throw Error("invalid matching: a vertex appears in more than one pair");
  }
}

}  // namespace

void validate_matching(const Matching& m, const CallGraph& g, const CallGraph& h) {
  check_bijection_shape(m);
  size_t left_seen = 0, right_seen = 0;
  for (const MatchPair& p : m.pairs) {
    if (p.left != kDummyVertex) {
      if (p.left < 0 || p.left >= g.order()) {
        throw Error("invalid matching: left id " + std::to_string(p.left) + " out of range");
      }
      ++left_seen;
    }
    if (p.right != kDummyVertex) {
      if (p.right < 0 || p.right >= h.order()) {
        throw Error("invalid matching: right id " + std::to_string(p.right) + " out of range");
      }
      ++right_seen;
    }
  }
  if (left_seen != static_cast<size_t>(g.order()) ||
      right_seen != static_cast<size_t>(h.order())) {
    throw Error("invalid matching: not a bijection over the augmented vertex sets");
  }
}

std::int64_t vertex_cost(const Matching& m) {
  check_bijection_shape(m);
  std::int64_t cost = 0;
  for (const MatchPair& p : m.pairs) {
    if ((p.left == kDummyVertex) != (p.right == kDummyVertex)) ++cost;
  }
  return cost;
}

std::int64_t edge_cost(const Matching& m, const CallGraph& g, const CallGraph& h) {
  validate_matching(m, g, h);
  MatchingView view = build_view(m, g.order(), h.order());
  std::int64_t preserved = 0;
  for (const Edge& e : g.edges()) {
    int a = view.phi[static_cast<size_t>(e.src)];
    int b = view.phi[static_cast<size_t>(e.dst)];
    if (a != kDummyVertex && b != kDummyVertex && h.has_edge(a, b)) ++preserved;
  }
  return static_cast<std::int64_t>(g.size()) + h.size() - 2 * preserved;
}

std::int64_t relabel_cost(const Matching& m, const CallGraph& g, const CallGraph& h) {
  validate_matching(m, g, h);
  std::int64_t cost = 0;
  for (const MatchPair& p : m.pairs) {
    if (p.left == kDummyVertex || p.right == kDummyVertex) continue;
    const Vertex& lv = g.vertex(p.left);
    const Vertex& rv = h.vertex(p.right);
    const bool lext = lv.kind == FunctionKind::External;
    const bool rext = rv.kind == FunctionKind::External;
    const bool matched_name = lext && rext && lv.name == rv.name;
    if (lext && !matched_name) ++cost;
    if (rext && !matched_name) ++cost;
  }
  return cost;
}

CostBreakdown edit_distance(const Matching& m, const CallGraph& g, const CallGraph& h) {
  validate_matching(m, g, h);
  CostBreakdown cost;
  cost.vertex_cost = vertex_cost(m);
  cost.edge_cost = edge_cost(m, g, h);
  cost.relabel_cost = relabel_cost(m, g, h);
  cost.total = cost.vertex_cost + cost.edge_cost + cost.relabel_cost;
  return cost;
}

double similarity(const CostBreakdown& cost, const CallGraph& g, const CallGraph& h) {
  const std::int64_t denom =
      static_cast<std::int64_t>(g.order()) + h.order() + g.size() + h.size();
  if (denom == 0) return 0.0;  // two null graphs are identical
  return static_cast<double>(cost.total) / static_cast<double>(denom);
}

std::string matching_to_text(const Matching& m) {
  std::string out;
  for (const MatchPair& p : m.pairs) {
    out += p.left == kDummyVertex ? "-" : std::to_string(p.left);
    out += ' ';
    out += p.right == kDummyVertex ? "-" : std::to_string(p.right);
    out += '\n';
  }
  return out;
}

}  // namespace graphfam
