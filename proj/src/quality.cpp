#include "graphfam/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphfam/error.hpp"

namespace graphfam {

namespace {

// Cluster member indices keyed by cluster id, restricted to assigned
// (non-noise) samples present in the matrix.
std::map<int, std::vector<int>> members_by_cluster(const DistanceMatrix& matrix,
                                                   const Clustering& clustering) {
  std::map<int, std::vector<int>> members;
  for (const auto& [label, cluster] : clustering.assignments) {
    members[cluster].push_back(matrix.index_of(label));
  }
  for (auto& [cluster, idx] : members) std::sort(idx.begin(), idx.end());
  return members;
}

}  // namespace

double sum_of_error(const DistanceMatrix& matrix, const Clustering& clustering, int p,
                    double scale) {
  if (p < 1) throw Error("p must be a positive integer");
  if (!clustering.has_medoids()) throw Error("sum of error requires medoids");
  double total = 0.0;
  for (const auto& [label, cluster] : clustering.assignments) {
    auto medoid = clustering.medoids.find(cluster);
    if (medoid == clustering.medoids.end()) {
      throw Error("no medoid recorded for cluster " + std::to_string(cluster));
    }
    const double d = scale * matrix.at(matrix.index_of(label), matrix.index_of(medoid->second));
    total += std::pow(d, p);
  }
  return total;
}

SilhouetteReport silhouette(const DistanceMatrix& matrix, const Clustering& clustering) {
  const auto members = members_by_cluster(matrix, clustering);
  if (members.size() < 2) {
    throw Error("silhouette needs at least 2 clusters, got " + std::to_string(members.size()));
  }

  SilhouetteReport report;
  double total = 0.0;
  std::int64_t count = 0;
  std::map<int, std::pair<double, std::int64_t>> per_cluster_acc;

  for (const auto& [cluster, own] : members) {
    for (int i : own) {
      double s = 0.0;
      if (own.size() > 1) {
        double cohesion = 0.0;
        for (int j : own) cohesion += matrix.at(i, j);
        const double a = cohesion / static_cast<double>(own.size() - 1);

        double b = std::numeric_limits<double>::infinity();
        for (const auto& [other, theirs] : members) {
          if (other == cluster) continue;
          double separation = 0.0;
          for (int j : theirs) separation += matrix.at(i, j);
          b = std::min(b, separation / static_cast<double>(theirs.size()));
        }
        const double denom = std::max(a, b);
        s = denom > 0.0 ? (b - a) / denom : 0.0;
      }
      // else: the only sample inside its cluster scores 0

      report.per_sample[matrix.labels()[static_cast<size_t>(i)]] = s;
      auto& acc = per_cluster_acc[cluster];
      acc.first += s;
      ++acc.second;
      total += s;
      ++count;
    }
  }
  for (const auto& [cluster, acc] : per_cluster_acc) {
    report.per_cluster[cluster] = acc.first / static_cast<double>(acc.second);
  }
  report.overall = total / static_cast<double>(count);
  return report;
}

std::map<int, ClusterSpread> diameter_tightness(const DistanceMatrix& matrix,
                                                const Clustering& clustering) {
  std::map<int, ClusterSpread> out;
  for (const auto& [cluster, own] : members_by_cluster(matrix, clustering)) {
    ClusterSpread spread;
    double sum = 0.0;
    std::int64_t pairs = 0;
    for (size_t a = 0; a < own.size(); ++a) {
      for (size_t b = a + 1; b < own.size(); ++b) {
        const double d = matrix.at(own[a], own[b]);
        spread.diameter = std::max(spread.diameter, d);
        sum += d;
        ++pairs;
      }
    }
    spread.tightness = pairs > 0 ? sum / static_cast<double>(pairs) : 0.0;
    out[cluster] = spread;
  }
  return out;
}

std::vector<double> kdist_curve(const DistanceMatrix& matrix, int k) {
  const int n = matrix.size();
  if (k < 1 || k >= n) {
    throw Error("k must be in 1.." + std::to_string(n - 1) + ", got " + std::to_string(k));
  }
  std::vector<double> curve;
  curve.reserve(static_cast<size_t>(n));
  std::vector<double> row;
  for (int i = 0; i < n; ++i) {
    row.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) row.push_back(matrix.at(i, j));
    }
    std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
    curve.push_back(row[static_cast<size_t>(k - 1)]);
  }
  std::sort(curve.begin(), curve.end());
  return curve;
}

FrequencyTable frequency_table(const Clustering& clustering,
                               const std::map<std::string, std::string>& family_labels) {
  auto family_of = [&](const std::string& label) -> const std::string& {
    auto it = family_labels.find(label);
    if (it == family_labels.end()) {
      throw Error("sample \"" + label + "\" has no family label");
    }
    return it->second;
  };

  FrequencyTable table;
  std::map<std::string, std::int64_t> family_index;
  auto family_row = [&](const std::string& family) {
    auto it = family_index.find(family);
    if (it == family_index.end()) {
      it = family_index.emplace(family, static_cast<std::int64_t>(table.families.size())).first;
      table.families.push_back(family);
    }
    return it->second;
  };

  // Families in sorted order for a stable table.
  for (const auto& [label, cluster] : clustering.assignments) family_of(label);
  for (const std::string& label : clustering.noise) family_of(label);
  {
    std::set<std::string> names;
    for (const auto& [label, cluster] : clustering.assignments) names.insert(family_of(label));
    for (const std::string& label : clustering.noise) names.insert(family_of(label));
    for (const std::string& name : names) family_row(name);
  }

  const int k = clustering.cluster_count();
  for (int c = 0; c < k; ++c) table.cluster_ids.push_back(c);
  table.counts.assign(table.families.size(),
                      std::vector<std::int64_t>(static_cast<size_t>(k), 0));
  table.noise_counts.assign(table.families.size(), 0);

  for (const auto& [label, cluster] : clustering.assignments) {
    ++table.counts[static_cast<size_t>(family_row(family_of(label)))][static_cast<size_t>(cluster)];
  }
  for (const std::string& label : clustering.noise) {
    ++table.noise_counts[static_cast<size_t>(family_row(family_of(label)))];
  }
  for (size_t f = 0; f < table.families.size(); ++f) {
    std::int64_t total = table.noise_counts[f];
    for (std::int64_t c : table.counts[f]) total += c;
    table.family_totals[table.families[f]] = total;
  }
  return table;
}

double cluster_purity(const Clustering& clustering,
                      const std::map<std::string, std::string>& family_labels) {
  if (clustering.assignments.empty()) {
    throw Error("purity undefined: no clustered samples");
  }
  std::map<int, std::map<std::string, std::int64_t>> counts;
  for (const auto& [label, cluster] : clustering.assignments) {
    auto it = family_labels.find(label);
    if (it == family_labels.end()) {
      throw Error("sample \"" + label + "\" has no family label");
    }
    ++counts[cluster][it->second];
  }
  std::int64_t majority = 0;
  for (const auto& [cluster, families] : counts) {
    std::int64_t best = 0;
    for (const auto& [family, count] : families) best = std::max(best, count);
    majority += best;
  }
  return static_cast<double>(majority) / static_cast<double>(clustering.assignments.size());
}

}  // namespace graphfam
