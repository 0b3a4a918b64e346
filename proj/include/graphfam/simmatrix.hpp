#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graphfam/anneal.hpp"
#include "graphfam/graph.hpp"

namespace graphfam {

// Symmetric pairwise dissimilarity matrix over a corpus. Entries are sigma
// scores in [0,1] with a zero diagonal; validated on construction and load.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<std::string> labels, std::vector<double> values);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  double at(int i, int j) const {
    return values_[static_cast<size_t>(i) * labels_.size() + static_cast<size_t>(j)];
  }
  const std::vector<double>& values() const { return values_; }

  // Index of a label; throws Error when absent.
  int index_of(std::string_view label) const;

  std::string to_csv() const;
  static DistanceMatrix from_csv(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static DistanceMatrix load(const std::filesystem::path& path);

 private:
  void validate() const;

  std::vector<std::string> labels_;
  std::vector<double> values_;  // row-major n*n
  std::unordered_map<std::string, int> index_;
};

// Seed for one pair, derived from the labels so that corpus order and
// scheduling cannot change any score.
std::uint64_t pair_seed(std::uint64_t base_seed, std::string_view a, std::string_view b);

// Computes all pairwise scores over a bounded worker pool. Bit-identical
// output for any worker count.
DistanceMatrix compute_matrix(const GraphCorpus& corpus, const AnnealConfig& cfg,
                              unsigned workers = 1,
                              int exact_threshold = kDefaultExactOrderLimit);

}  // namespace graphfam
