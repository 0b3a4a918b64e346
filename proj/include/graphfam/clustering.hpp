#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "graphfam/simmatrix.hpp"

namespace graphfam {

// Assignment of samples to dense cluster ids, plus medoids when produced by
// k-medoids and a noise set when produced by DBSCAN. Assigned and noise
// labels partition the sample set.
struct Clustering {
  std::map<std::string, int> assignments;
  std::map<int, std::string> medoids;  // empty when the algorithm has none
  std::set<std::string> noise;

  int cluster_count() const;
  bool has_medoids() const { return !medoids.empty(); }

  // Checks the partition against a label universe: disjoint cover, dense
  // non-empty cluster ids, medoids members of their own clusters.
  void validate(const std::vector<std::string>& labels) const;
};

struct KMedoidsConfig {
  enum class Init { Random, PlusPlus, Trained };

  int k = 1;
  Init init = Init::Random;
  std::vector<std::string> trained_medoids;  // used when init == Trained
  int max_iterations = 100;
  std::uint64_t seed = 0;
};

struct KMedoidsResult {
  Clustering clustering;
  // Objective after each iteration; strictly decreasing by construction.
  std::vector<double> objective_trace;
  double objective = 0.0;
};

// Alternating assignment / medoid-update descent on the within-cluster
// sigma sum. Ties go to the lowest cluster id (assignment) and lowest
// sample index (medoid update); emptied clusters are reseeded with the
// sample farthest from their medoid.
KMedoidsResult kmedoids(const DistanceMatrix& matrix, const KMedoidsConfig& cfg);

// Uniform sample of k distinct labels.
std::vector<std::string> init_random(const DistanceMatrix& matrix, int k, std::uint64_t seed);

// First medoid uniform, then each next one drawn with probability
// proportional to squared distance to the nearest chosen medoid. Falls back
// to a uniform draw when every remaining sample has zero distance.
std::vector<std::string> init_plusplus(const DistanceMatrix& matrix, int k, std::uint64_t seed);

// Validated pass-through of caller-chosen medoid labels.
std::vector<std::string> init_trained(const DistanceMatrix& matrix,
                                      const std::vector<std::string>& labels);

struct DbscanConfig {
  // Core test is strict: a point is core when its rad-neighborhood
  // (including itself) holds more than min_pts samples. min_pts 0 makes
  // every point core.
  int min_pts = 4;
  double rad = 0.3;  // sigma units, [0,1]

  void validate() const;
};

// Density clustering: connected components of core points under
// sigma <= rad, border points attached to their nearest core, the rest
// noise. Cluster ids follow ascending smallest-member index.
Clustering dbscan(const DistanceMatrix& matrix, const DbscanConfig& cfg);

// CSV forms: assignments as `label,cluster` with -1 for noise; medoids as
// `cluster,medoid_label`.
std::string assignments_to_csv(const Clustering& c);
std::string medoids_to_csv(const Clustering& c);
Clustering clustering_from_csv(const std::string& assignments_csv,
                               const std::string* medoids_csv = nullptr);

}  // namespace graphfam
