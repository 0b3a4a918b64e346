#pragma once

// Internal state of the simulated-annealing matcher. Lives outside the
// public headers; the white-box tests include it to check that move deltas
// agree with full recomputation.

#include <cstdint>
#include <random>
#include <vector>

#include "graphfam/graph.hpp"
#include "graphfam/matching.hpp"

namespace graphfam::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

// Deterministic helpers on top of mt19937_64; std::uniform_int_distribution
// is not portable across standard libraries.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::uint64_t next() { return eng(); }
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Matching state over the reduced augmented sets: pinned external pairs are
// immutable; the remaining left entities (unpinned reals plus one dummy per
// unpinned right vertex) each hold one right entity. Swapping the right
// entities of two free slots reaches every matching.
class Annealer {
 public:
  Annealer(const CallGraph& g, const CallGraph& h);

  std::size_t free_slot_count() const { return slots_.size(); }
  std::size_t pinned_count() const { return pinned_; }
  std::int64_t current_cost() const { return cost_; }

  // Random assignment of the free right entities; resets the current cost.
  void seed_completion(Rng& rng);

  // Recomputes the total edit cost from the full assignment.
  std::int64_t full_cost() const;

  // Cost change of swapping the right entities of slots a and b. Touches
  // only the four affected entities and their incident edges.
  std::int64_t swap_delta(std::size_t a, std::size_t b) const;

  void apply_swap(std::size_t a, std::size_t b, std::int64_t delta);

  std::vector<int> snapshot() const { return vals_; }
  void restore(const std::vector<int>& vals, std::int64_t cost);

  Matching matching() const;

 private:
  std::int64_t pair_cost(int left, int right) const;
  template <typename Image>
  std::int64_t preserved_incident(int la, int lb, Image&& img) const;
  void rebuild_images();

  const CallGraph& g_;
  const CallGraph& h_;
  std::size_t pinned_ = 0;
  std::vector<int> slots_;  // left entity per free slot (kDummyVertex for dummies)
  std::vector<int> vals_;   // right entity per free slot
  std::vector<int> phi_;    // left id -> right id or kDummyVertex
  std::vector<int> psi_;    // right id -> left id or kDummyVertex
  std::int64_t cost_ = 0;
};

}  // namespace graphfam::detail
