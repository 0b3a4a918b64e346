#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "graphfam/clustering.hpp"
#include "graphfam/simmatrix.hpp"

namespace graphfam {

// Scatter of a clustering: sum over clusters of (scale * sigma(x, medoid))^p.
// Noise samples are excluded; requires medoids.
double sum_of_error(const DistanceMatrix& matrix, const Clustering& clustering, int p,
                    double scale = 100.0);

struct SilhouetteReport {
  double overall = 0.0;
  std::map<int, double> per_cluster;
  std::map<std::string, double> per_sample;
};

// Silhouette per sample, per cluster and overall. Noise samples are excluded
// everywhere; the only member of a singleton cluster scores 0. Requires at
// least two clusters.
SilhouetteReport silhouette(const DistanceMatrix& matrix, const Clustering& clustering);

struct ClusterSpread {
  double diameter = 0.0;   // max pairwise sigma within the cluster
  double tightness = 0.0;  // mean pairwise sigma within the cluster

  bool operator==(const ClusterSpread&) const = default;
};

std::map<int, ClusterSpread> diameter_tightness(const DistanceMatrix& matrix,
                                                const Clustering& clustering);

// Sigma to each sample's k-th nearest other sample, sorted ascending.
std::vector<double> kdist_curve(const DistanceMatrix& matrix, int k);

struct FrequencyTable {
  std::vector<std::string> families;                  // row order
  std::vector<int> cluster_ids;                       // column order, ascending
  std::vector<std::vector<std::int64_t>> counts;      // [family][cluster]
  std::vector<std::int64_t> noise_counts;             // per family
  std::map<std::string, std::int64_t> family_totals;  // clustered + noise
};

// How the members of each ground-truth family spread over clusters and
// noise. Every clustered or noise sample must have a family label.
FrequencyTable frequency_table(const Clustering& clustering,
                               const std::map<std::string, std::string>& family_labels);

// Majority-family fraction over clustered (non-noise) samples; errors when
// nothing is clustered.
double cluster_purity(const Clustering& clustering,
                      const std::map<std::string, std::string>& family_labels);

// Aggregate of the individual metrics, as assembled by the CLI and the
// python bindings.
struct QualityReport {
  std::map<int, double> se;  // p -> SE_p
  SilhouetteReport silhouette;
  std::map<int, ClusterSpread> spread;
};

}  // namespace graphfam
