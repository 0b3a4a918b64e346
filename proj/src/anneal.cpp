#include "graphfam/anneal.hpp"

#include <algorithm>
#include <cmath>

#include "anneal_impl.hpp"

namespace graphfam {

namespace detail {

Annealer::Annealer(const CallGraph& g, const CallGraph& h) : g_(g), h_(h) {
  phi_.assign(static_cast<size_t>(g.order()), kDummyVertex);
  psi_.assign(static_cast<size_t>(h.order()), kDummyVertex);

  // Stage 1: pin identically named externals one-to-one.
  for (int u = 0; u < g.order(); ++u) {
    const Vertex& v = g.vertex(u);
    if (v.kind != FunctionKind::External) continue;
    if (auto partner = h.find_external(v.name)) {
      phi_[static_cast<size_t>(u)] = *partner;
      psi_[static_cast<size_t>(*partner)] = u;
      ++pinned_;
    }
  }

  for (int u = 0; u < g.order(); ++u) {
    if (phi_[static_cast<size_t>(u)] == kDummyVertex) slots_.push_back(u);
  }
  std::size_t free_rights = 0;
  for (int v = 0; v < h.order(); ++v) {
    if (psi_[static_cast<size_t>(v)] == kDummyVertex) ++free_rights;
  }
  slots_.resize(slots_.size() + free_rights, kDummyVertex);

  // Identity-ish default completion; callers reseed before searching.
  vals_.clear();
  vals_.reserve(slots_.size());
  for (int v = 0; v < h.order(); ++v) {
    if (psi_[static_cast<size_t>(v)] == kDummyVertex) vals_.push_back(v);
  }
  vals_.resize(slots_.size(), kDummyVertex);
  rebuild_images();
  cost_ = full_cost();
}

void Annealer::seed_completion(Rng& rng) {
  for (std::size_t i = vals_.size(); i > 1; --i) {
    std::swap(vals_[i - 1], vals_[rng.index(i)]);
  }
  rebuild_images();
  cost_ = full_cost();
}

void Annealer::rebuild_images() {
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    int l = slots_[k];
    int r = vals_[k];
    if (l != kDummyVertex) phi_[static_cast<size_t>(l)] = r;
    if (r != kDummyVertex) psi_[static_cast<size_t>(r)] = l;
  }
}

std::int64_t Annealer::pair_cost(int left, int right) const {
  if (left == kDummyVertex && right == kDummyVertex) return 0;
  if (left == kDummyVertex || right == kDummyVertex) return 1;
  const Vertex& lv = g_.vertex(left);
  const Vertex& rv = h_.vertex(right);
  const bool lext = lv.kind == FunctionKind::External;
  const bool rext = rv.kind == FunctionKind::External;
  const bool matched = lext && rext && lv.name == rv.name;
  return static_cast<std::int64_t>(lext && !matched) + static_cast<std::int64_t>(rext && !matched);
}

std::int64_t Annealer::full_cost() const {
  std::int64_t vr = 0;
  for (int u = 0; u < g_.order(); ++u) vr += pair_cost(u, phi_[static_cast<size_t>(u)]);
  for (int v = 0; v < h_.order(); ++v) {
    if (psi_[static_cast<size_t>(v)] == kDummyVertex) ++vr;
  }
  std::int64_t preserved = 0;
  for (const Edge& e : g_.edges()) {
    int a = phi_[static_cast<size_t>(e.src)];
    int b = phi_[static_cast<size_t>(e.dst)];
    if (a != kDummyVertex && b != kDummyVertex && h_.has_edge(a, b)) ++preserved;
  }
  return vr + g_.size() + h_.size() - 2 * preserved;
}

template <typename Image>
std::int64_t Annealer::preserved_incident(int la, int lb, Image&& img) const {
  std::int64_t preserved = 0;
  auto check = [&](int src, int dst) {
    int a = img(src);
    int b = img(dst);
    if (a != kDummyVertex && b != kDummyVertex && h_.has_edge(a, b)) ++preserved;
  };
  if (la != kDummyVertex) {
    for (int w : g_.out_neighbors(la)) check(la, w);
    for (int w : g_.in_neighbors(la)) {
      if (w != la) check(w, la);
    }
  }
  if (lb != kDummyVertex) {
    for (int w : g_.out_neighbors(lb)) {
      if (w != la) check(lb, w);
    }
    for (int w : g_.in_neighbors(lb)) {
      if (w != lb && w != la) check(w, lb);
    }
  }
  return preserved;
}

std::int64_t Annealer::swap_delta(std::size_t a, std::size_t b) const {
  const int la = slots_[a], lb = slots_[b];
  const int va = vals_[a], vb = vals_[b];
  std::int64_t delta = pair_cost(la, vb) + pair_cost(lb, va) -
                       pair_cost(la, va) - pair_cost(lb, vb);
  if (la != kDummyVertex || lb != kDummyVertex) {
    auto before = [&](int x) { return phi_[static_cast<size_t>(x)]; };
    auto after = [&](int x) {
      if (x == la) return vb;
      if (x == lb) return va;
      return phi_[static_cast<size_t>(x)];
    };
    delta -= 2 * (preserved_incident(la, lb, after) - preserved_incident(la, lb, before));
  }
  return delta;
}

void Annealer::apply_swap(std::size_t a, std::size_t b, std::int64_t delta) {
  const int la = slots_[a], lb = slots_[b];
  const int va = vals_[a], vb = vals_[b];
  std::swap(vals_[a], vals_[b]);
  if (la != kDummyVertex) phi_[static_cast<size_t>(la)] = vb;
  if (lb != kDummyVertex) phi_[static_cast<size_t>(lb)] = va;
  if (va != kDummyVertex) psi_[static_cast<size_t>(va)] = lb;
  if (vb != kDummyVertex) psi_[static_cast<size_t>(vb)] = la;
  cost_ += delta;
}

void Annealer::restore(const std::vector<int>& vals, std::int64_t cost) {
  vals_ = vals;
  rebuild_images();
  cost_ = cost;
}

Matching Annealer::matching() const {
  Matching m;
  m.left_label = g_.label();
  m.right_label = h_.label();
  for (int u = 0; u < g_.order(); ++u) {
    m.pairs.push_back({u, phi_[static_cast<size_t>(u)]});
  }
  for (int v = 0; v < h_.order(); ++v) {
    if (psi_[static_cast<size_t>(v)] == kDummyVertex) m.pairs.push_back({kDummyVertex, v});
  }
  return m;
}

}  // namespace detail

void AnnealConfig::validate() const {
  if (initial_temperature <= 0) throw Error("initial_temperature must be positive");
  if (cooling_factor <= 0 || cooling_factor >= 1) throw Error("cooling_factor must be in (0,1)");
  if (steps_per_temperature && *steps_per_temperature == 0) {
    throw Error("steps_per_temperature must be positive");
  }
  if (minimum_temperature <= 0) throw Error("minimum_temperature must be positive");
  if (minimum_temperature >= initial_temperature) {
    throw Error("minimum_temperature must be below initial_temperature");
  }
  if (restarts == 0) throw Error("restarts must be positive");
}

namespace {

SimilarityScore score_from(const Matching& m, const CallGraph& g, const CallGraph& h) {
  SimilarityScore score;
  score.cost = edit_distance(m, g, h);
  score.sigma = similarity(score.cost, g, h);
  score.matching = m;
  return score;
}

// With an empty side the matching is forced: everything maps to dummies.
SimilarityScore forced_match(const CallGraph& g, const CallGraph& h) {
  Matching m;
  m.left_label = g.label();
  m.right_label = h.label();
  for (int u = 0; u < g.order(); ++u) m.pairs.push_back({u, kDummyVertex});
  for (int v = 0; v < h.order(); ++v) m.pairs.push_back({kDummyVertex, v});
  return score_from(m, g, h);
}

}  // namespace

SimilarityScore anneal_match(const CallGraph& g, const CallGraph& h, const AnnealConfig& cfg) {
  cfg.validate();
  if (g.is_null() || h.is_null()) return forced_match(g, h);

  detail::Annealer state(g, h);
  const std::size_t n_slots = state.free_slot_count();

  std::vector<int> best_vals;
  std::int64_t best_cost = 0;
  bool have_best = false;

  for (std::uint32_t restart = 0; restart < cfg.restarts; ++restart) {
    detail::Rng rng(detail::mix_seed(cfg.seed, restart));
    state.seed_completion(rng);
    if (!have_best || state.current_cost() < best_cost) {
      best_vals = state.snapshot();
      best_cost = state.current_cost();
      have_best = true;
    }
    if (n_slots < 2) continue;

    const std::uint64_t steps =
        cfg.steps_per_temperature ? *cfg.steps_per_temperature
                                  : static_cast<std::uint64_t>(8) * n_slots;
    double temperature =
        cfg.initial_temperature * std::max<double>(1.0, static_cast<double>(state.current_cost()));
    while (temperature > cfg.minimum_temperature) {
      for (std::uint64_t step = 0; step < steps; ++step) {
        std::size_t a = rng.index(n_slots);
        std::size_t b = rng.index(n_slots - 1);
        if (b >= a) ++b;
        const std::int64_t delta = state.swap_delta(a, b);
        if (delta <= 0 || rng.unit() < std::exp(-static_cast<double>(delta) / temperature)) {
          state.apply_swap(a, b, delta);
          if (state.current_cost() < best_cost) {
            best_vals = state.snapshot();
            best_cost = state.current_cost();
          }
        }
      }
      temperature *= cfg.cooling_factor;
    }
  }

  state.restore(best_vals, best_cost);
  return score_from(state.matching(), g, h);
}

double pair_similarity(const CallGraph& g, const CallGraph& h, const AnnealConfig& cfg,
                       int exact_threshold) {
  if (g.order() + h.order() <= exact_threshold) {
    return exact_min_ged(g, h, exact_threshold).sigma;
  }
  const SimilarityScore forward = anneal_match(g, h, cfg);
  const SimilarityScore backward = anneal_match(h, g, cfg);
  return std::min(forward.sigma, backward.sigma);
}

}  // namespace graphfam
