#include "graphfam/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "graphfam/csv.hpp"
#include "graphfam/error.hpp"

#include "anneal_impl.hpp"  // detail::Rng

namespace graphfam {

namespace {

std::vector<int> pick_random_indices(int n, int k, std::uint64_t seed) {
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  detail::Rng rng(seed);
  for (int i = 0; i < k; ++i) {
    const size_t j = i + rng.index(static_cast<size_t>(n - i));
    std::swap(pool[static_cast<size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<size_t>(k));
  return pool;
}

std::vector<std::string> to_labels(const DistanceMatrix& m, const std::vector<int>& idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(m.labels()[static_cast<size_t>(i)]);
  return out;
}

}  // namespace

int Clustering::cluster_count() const {
  int max_id = -1;
  for (const auto& [label, cluster] : assignments) max_id = std::max(max_id, cluster);
  return max_id + 1;
}

void Clustering::validate(const std::vector<std::string>& labels) const {
  const int k = cluster_count();
  std::vector<std::int64_t> sizes(static_cast<size_t>(k), 0);
  for (const auto& [label, cluster] : assignments) {
    if (cluster < 0 || cluster >= k) throw Error("cluster id out of range for \"" + label + "\"");
    if (noise.count(label)) throw Error("sample \"" + label + "\" both assigned and noise");
    ++sizes[static_cast<size_t>(cluster)];
  }
  for (int c = 0; c < k; ++c) {
    if (sizes[static_cast<size_t>(c)] == 0) {
      throw Error("cluster " + std::to_string(c) + " is empty");
    }
  }
  if (assignments.size() + noise.size() != labels.size()) {
    throw Error("clustering does not cover the sample set");
  }
  for (const std::string& label : labels) {
    if (!assignments.count(label) && !noise.count(label)) {
      throw Error("sample \"" + label + "\" missing from clustering");
    }
  }
  for (const auto& [cluster, medoid] : medoids) {
    auto it = assignments.find(medoid);
    if (it == assignments.end() || it->second != cluster) {
      throw Error("medoid \"" + medoid + "\" not a member of cluster " + std::to_string(cluster));
    }
  }
}

std::vector<std::string> init_random(const DistanceMatrix& matrix, int k, std::uint64_t seed) {
  const int n = matrix.size();
  if (k < 1 || k > n) throw Error("k must be in 1.." + std::to_string(n));
  return to_labels(matrix, pick_random_indices(n, k, seed));
}

std::vector<std::string> init_plusplus(const DistanceMatrix& matrix, int k, std::uint64_t seed) {
  const int n = matrix.size();
  if (k < 1 || k > n) throw Error("k must be in 1.." + std::to_string(n));

  detail::Rng rng(seed);
  std::vector<int> chosen;
  std::vector<bool> is_chosen(static_cast<size_t>(n), false);
  chosen.push_back(static_cast<int>(rng.index(static_cast<size_t>(n))));
  is_chosen[static_cast<size_t>(chosen[0])] = true;

  // nearest[i] = min sigma to any chosen medoid
  std::vector<double> nearest(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) nearest[static_cast<size_t>(i)] = matrix.at(i, chosen[0]);

  while (static_cast<int>(chosen.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!is_chosen[static_cast<size_t>(i)]) {
        total += nearest[static_cast<size_t>(i)] * nearest[static_cast<size_t>(i)];
      }
    }
    int pick = -1;
    if (total > 0.0) {
      const double target = rng.unit() * total;
      double cum = 0.0;
      for (int i = 0; i < n; ++i) {
        if (is_chosen[static_cast<size_t>(i)]) continue;
        const double w = nearest[static_cast<size_t>(i)] * nearest[static_cast<size_t>(i)];
        if (w == 0.0) continue;
        cum += w;
        if (cum > target) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {  // numeric edge: take the last weighted candidate
        for (int i = n - 1; i >= 0; --i) {
          if (!is_chosen[static_cast<size_t>(i)] && nearest[static_cast<size_t>(i)] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    }
    if (pick < 0) {
      // Every remaining sample coincides with a chosen medoid; fall back to
      // a uniform draw among them.
      std::vector<int> remaining;
      for (int i = 0; i < n; ++i) {
        if (!is_chosen[static_cast<size_t>(i)]) remaining.push_back(i);
      }
      pick = remaining[rng.index(remaining.size())];
    }
    chosen.push_back(pick);
    is_chosen[static_cast<size_t>(pick)] = true;
    for (int i = 0; i < n; ++i) {
      nearest[static_cast<size_t>(i)] =
          std::min(nearest[static_cast<size_t>(i)], matrix.at(i, pick));
    }
  }
  return to_labels(matrix, chosen);
}

std::vector<std::string> init_trained(const DistanceMatrix& matrix,
                                      const std::vector<std::string>& labels) {
  if (labels.empty()) throw Error("trained initialization needs at least one label");
  std::set<std::string> seen;
  for (const std::string& label : labels) {
    matrix.index_of(label);  // throws on unknown label
    if (!seen.insert(label).second) {
      throw Error("duplicate trained medoid \"" + label + "\"");
    }
  }
  return labels;
}

KMedoidsResult kmedoids(const DistanceMatrix& matrix, const KMedoidsConfig& cfg) {
  const int n = matrix.size();
  if (cfg.k < 1 || cfg.k > n) {
    throw Error("k must be in 1.." + std::to_string(n) + ", got " + std::to_string(cfg.k));
  }
  if (cfg.max_iterations < 1) throw Error("max_iterations must be positive");

  std::vector<std::string> seeds;
  switch (cfg.init) {
    case KMedoidsConfig::Init::Random:
      seeds = init_random(matrix, cfg.k, cfg.seed);
      break;
    case KMedoidsConfig::Init::PlusPlus:
      seeds = init_plusplus(matrix, cfg.k, cfg.seed);
      break;
    case KMedoidsConfig::Init::Trained:
      seeds = init_trained(matrix, cfg.trained_medoids);
      if (static_cast<int>(seeds.size()) != cfg.k) {
        throw Error("trained initialization supplied " + std::to_string(seeds.size()) +
                    " medoids for k=" + std::to_string(cfg.k));
      }
      break;
  }

  const int k = cfg.k;
  std::vector<int> medoid(static_cast<size_t>(k));
  for (int c = 0; c < k; ++c) medoid[static_cast<size_t>(c)] = matrix.index_of(seeds[static_cast<size_t>(c)]);

  std::vector<int> assign(static_cast<size_t>(n), 0);
  std::vector<double> trace;
  std::vector<int> prev_assign, prev_medoid;
  double prev_objective = std::numeric_limits<double>::infinity();

  for (int iteration = 0; iteration < cfg.max_iterations; ++iteration) {
    prev_assign = assign;
    prev_medoid = medoid;

    // Assignment: nearest medoid, ties to the lowest cluster id.
    for (int i = 0; i < n; ++i) {
      int best_c = 0;
      double best_d = matrix.at(i, medoid[0]);
      for (int c = 1; c < k; ++c) {
        const double d = matrix.at(i, medoid[static_cast<size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      assign[static_cast<size_t>(i)] = best_c;
    }

    // Repair: reseed any emptied cluster with the sample farthest from its
    // medoid, drawn from clusters that can spare a non-medoid member.
    std::vector<std::vector<int>> members(static_cast<size_t>(k));
    for (int i = 0; i < n; ++i) members[static_cast<size_t>(assign[static_cast<size_t>(i)])].push_back(i);
    for (int c = 0; c < k; ++c) {
      if (!members[static_cast<size_t>(c)].empty()) continue;
      int pick = -1;
      double far = -1.0;
      for (int i = 0; i < n; ++i) {
        const int home = assign[static_cast<size_t>(i)];
        if (members[static_cast<size_t>(home)].size() < 2) continue;
        if (i == medoid[static_cast<size_t>(home)]) continue;
        const double d = matrix.at(i, medoid[static_cast<size_t>(c)]);
        if (d > far) {
          far = d;
          pick = i;
        }
      }
      if (pick < 0) throw Error("internal: empty-cluster repair found no candidate");
      auto& old_members = members[static_cast<size_t>(assign[static_cast<size_t>(pick)])];
      old_members.erase(std::find(old_members.begin(), old_members.end(), pick));
      assign[static_cast<size_t>(pick)] = c;
      members[static_cast<size_t>(c)].push_back(pick);
      medoid[static_cast<size_t>(c)] = pick;
    }

    // Update: each medoid becomes the member minimizing the within-cluster
    // sigma sum; ties to the lowest sample index.
    for (int c = 0; c < k; ++c) {
      const std::vector<int>& cluster = members[static_cast<size_t>(c)];
      int best = cluster[0];
      double best_sum = std::numeric_limits<double>::infinity();
      for (int candidate : cluster) {
        double sum = 0.0;
        for (int other : cluster) sum += matrix.at(candidate, other);
        if (sum < best_sum) {
          best_sum = sum;
          best = candidate;
        }
      }
      medoid[static_cast<size_t>(c)] = best;
    }

    double objective = 0.0;
    for (int i = 0; i < n; ++i) {
      objective += matrix.at(i, medoid[static_cast<size_t>(assign[static_cast<size_t>(i)])]);
    }

    if (objective >= prev_objective) {
      // No improvement: keep the previous state so the recorded trace is
      // strictly decreasing and matches the returned clustering.
      assign = prev_assign;
      medoid = prev_medoid;
      break;
    }
    trace.push_back(objective);
    prev_objective = objective;
  }

  KMedoidsResult result;
  result.objective_trace = trace;
  result.objective = trace.empty() ? 0.0 : trace.back();
  for (int i = 0; i < n; ++i) {
    result.clustering.assignments[matrix.labels()[static_cast<size_t>(i)]] =
        assign[static_cast<size_t>(i)];
  }
  for (int c = 0; c < k; ++c) {
    result.clustering.medoids[c] = matrix.labels()[static_cast<size_t>(medoid[static_cast<size_t>(c)])];
  }
  result.clustering.validate(matrix.labels());
  return result;
}

void DbscanConfig::validate() const {
  if (min_pts < 0) throw Error("min_pts must be non-negative");
  if (rad < 0.0 || rad > 1.0) throw Error("rad must be in [0,1] (sigma units)");
}

Clustering dbscan(const DistanceMatrix& matrix, const DbscanConfig& cfg) {
  cfg.validate();
  const int n = matrix.size();

  std::vector<std::vector<int>> neighborhood(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (matrix.at(i, j) <= cfg.rad) neighborhood[static_cast<size_t>(i)].push_back(j);
    }
  }
  std::vector<bool> core(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    core[static_cast<size_t>(i)] =
        static_cast<int>(neighborhood[static_cast<size_t>(i)].size()) > cfg.min_pts;
  }

  // Connected components of core points under sigma <= rad.
  std::vector<int> component(static_cast<size_t>(n), -1);
  int components = 0;
  for (int i = 0; i < n; ++i) {
    if (!core[static_cast<size_t>(i)] || component[static_cast<size_t>(i)] >= 0) continue;
    std::vector<int> stack{i};
    component[static_cast<size_t>(i)] = components;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : neighborhood[static_cast<size_t>(x)]) {
        if (core[static_cast<size_t>(y)] && component[static_cast<size_t>(y)] < 0) {
          component[static_cast<size_t>(y)] = components;
          stack.push_back(y);
        }
      }
    }
    ++components;
  }

  // Border points join the cluster of their nearest core point; ties go to
  // the lowest sample index.
  for (int i = 0; i < n; ++i) {
    if (core[static_cast<size_t>(i)]) continue;
    int nearest = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int y : neighborhood[static_cast<size_t>(i)]) {
      if (!core[static_cast<size_t>(y)]) continue;
      const double d = matrix.at(i, y);
      if (d < best || (d == best && (nearest < 0 || y < nearest))) {
        best = d;
        nearest = y;
      }
    }
    if (nearest >= 0) component[static_cast<size_t>(i)] = component[static_cast<size_t>(nearest)];
  }

  // Renumber clusters by ascending smallest-member index.
  std::vector<int> first_member(static_cast<size_t>(components), n);
  for (int i = 0; i < n; ++i) {
    const int c = component[static_cast<size_t>(i)];
    if (c >= 0) first_member[static_cast<size_t>(c)] = std::min(first_member[static_cast<size_t>(c)], i);
  }
  std::vector<int> order(static_cast<size_t>(components));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return first_member[static_cast<size_t>(a)] < first_member[static_cast<size_t>(b)]; });
  std::vector<int> renumber(static_cast<size_t>(components));
  for (int rank = 0; rank < components; ++rank) renumber[static_cast<size_t>(order[static_cast<size_t>(rank)])] = rank;

  Clustering result;
  for (int i = 0; i < n; ++i) {
    const std::string& label = matrix.labels()[static_cast<size_t>(i)];
    const int c = component[static_cast<size_t>(i)];
    if (c < 0) {
      result.noise.insert(label);
    } else {
      result.assignments[label] = renumber[static_cast<size_t>(c)];
    }
  }
  result.validate(matrix.labels());
  return result;
}

std::string assignments_to_csv(const Clustering& c) {
  std::string out = "label,cluster\n";
  for (const auto& [label, cluster] : c.assignments) {
    csv::require_plain_field(label, "sample label");
    out += label + "," + std::to_string(cluster) + "\n";
  }
  for (const std::string& label : c.noise) {
    csv::require_plain_field(label, "sample label");
    out += label + ",-1\n";
  }
  return out;
}

std::string medoids_to_csv(const Clustering& c) {
  std::string out = "cluster,medoid_label\n";
  for (const auto& [cluster, medoid] : c.medoids) {
    csv::require_plain_field(medoid, "medoid label");
    out += std::to_string(cluster) + "," + medoid + "\n";
  }
  return out;
}

Clustering clustering_from_csv(const std::string& assignments_csv,
                               const std::string* medoids_csv) {
  Clustering c;
  std::vector<std::string> lines = csv::split_lines(assignments_csv);
  if (lines.empty() || lines[0] != "label,cluster") {
    throw ParseError("assignments: line 1: expected header `label,cluster`");
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = csv::split_line(lines[i]);
    const std::string where = "assignments: line " + std::to_string(i + 1);
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError(where + ": expected `label,cluster`");
    }
    int cluster = 0;
    try {
      cluster = std::stoi(fields[1]);
    } catch (const std::exception&) {
      throw ParseError(where + ": not a cluster id: '" + fields[1] + "'");
    }
    if (c.assignments.count(fields[0]) || c.noise.count(fields[0])) {
      throw ParseError(where + ": duplicate label \"" + fields[0] + "\"");
    }
    if (cluster == -1) {
      c.noise.insert(fields[0]);
    } else if (cluster >= 0) {
      c.assignments[fields[0]] = cluster;
    } else {
      throw ParseError(where + ": invalid cluster id " + fields[1]);
    }
  }
  if (medoids_csv) {
    std::vector<std::string> mlines = csv::split_lines(*medoids_csv);
    if (mlines.empty() || mlines[0] != "cluster,medoid_label") {
      throw ParseError("medoids: line 1: expected header `cluster,medoid_label`");
    }
    for (size_t i = 1; i < mlines.size(); ++i) {
      if (mlines[i].empty()) continue;
      std::vector<std::string> fields = csv::split_line(mlines[i]);
      const std::string where = "medoids: line " + std::to_string(i + 1);
      if (fields.size() != 2 || fields[1].empty()) {
        throw ParseError(where + ": expected `cluster,medoid_label`");
      }
      int cluster = 0;
      try {
        cluster = std::stoi(fields[0]);
      } catch (const std::exception&) {
        throw ParseError(where + ": not a cluster id: '" + fields[0] + "'");
      }
      if (!c.medoids.emplace(cluster, fields[1]).second) {
        throw ParseError(where + ": duplicate cluster id " + fields[0]);
      }
    }
  }
  std::vector<std::string> universe;
  for (const auto& [label, cluster] : c.assignments) universe.push_back(label);
  for (const std::string& label : c.noise) universe.push_back(label);
  c.validate(universe);
  return c;
}

}  // namespace graphfam
