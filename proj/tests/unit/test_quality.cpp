#include <doctest.h>

#include <cmath>
#include <random>

#include "graphfam/quality.hpp"

using namespace graphfam;

namespace {

DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<std::string> labels;
  std::vector<double> values;
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "s%02d", i);
    labels.push_back(buf);
    for (double v : rows[static_cast<size_t>(i)]) values.push_back(v);
  }
  return DistanceMatrix(std::move(labels), std::move(values));
}

Clustering two_blocks_of_two() {
  Clustering c;
  c.assignments = {{"s00", 0}, {"s01", 0}, {"s02", 1}, {"s03", 1}};
  c.medoids = {{0, "s00"}, {1, "s02"}};
  return c;
}

}  // namespace

TEST_CASE("sum of error substitutes scaled distances directly") {
  const DistanceMatrix m = from_rows({
      {0.0, 0.2},
      {0.2, 0.0},
  });
  Clustering c;
  c.assignments = {{"s00", 0}, {"s01", 0}};
  c.medoids = {{0, "s00"}};

  CHECK(sum_of_error(m, c, 1) == doctest::Approx(20.0));
  CHECK(sum_of_error(m, c, 2) == doctest::Approx(400.0));
  CHECK(sum_of_error(m, c, 1, 1.0) == doctest::Approx(0.2));

  SUBCASE("zero scatter for perfect clusters") {
    const DistanceMatrix zero = from_rows({
        {0.0, 0.0, 1.0},
        {0.0, 0.0, 1.0},
        {1.0, 1.0, 0.0},
    });
    Clustering perfect;
    perfect.assignments = {{"s00", 0}, {"s01", 0}, {"s02", 1}};
    perfect.medoids = {{0, "s00"}, {1, "s02"}};
    for (int p : {1, 2, 3}) CHECK(sum_of_error(zero, perfect, p) == 0.0);
  }
  SUBCASE("medoids are required") {
    Clustering no_medoids;
    no_medoids.assignments = {{"s00", 0}, {"s01", 0}};
    CHECK_THROWS_AS(sum_of_error(m, no_medoids, 1), Error);
  }
}

TEST_CASE("silhouette on two ideal blocks is 1 everywhere") {
  const DistanceMatrix m = from_rows({
      {0.0, 0.0, 1.0, 1.0},
      {0.0, 0.0, 1.0, 1.0},
      {1.0, 1.0, 0.0, 0.0},
      {1.0, 1.0, 0.0, 0.0},
  });
  const SilhouetteReport report = silhouette(m, two_blocks_of_two());
  CHECK(report.overall == doctest::Approx(1.0));
  for (const auto& [label, s] : report.per_sample) CHECK(s == doctest::Approx(1.0));
  for (const auto& [cluster, s] : report.per_cluster) CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("hand-built four-point instance gives 0.5") {
  const DistanceMatrix m = from_rows({
      {0.0, 0.2, 0.4, 0.4},
      {0.2, 0.0, 0.4, 0.4},
      {0.4, 0.4, 0.0, 0.2},
      {0.4, 0.4, 0.2, 0.0},
  });
  const SilhouetteReport report = silhouette(m, two_blocks_of_two());
  for (const auto& [label, s] : report.per_sample) {
    CHECK(s == doctest::Approx((0.4 - 0.2) / 0.4));
  }
  CHECK(report.overall == doctest::Approx(0.5));
}

TEST_CASE("singleton cluster members score zero") {
  const DistanceMatrix m = from_rows({
      {0.0, 0.1, 0.9},
      {0.1, 0.0, 0.9},
      {0.9, 0.9, 0.0},
  });
  Clustering c;
  c.assignments = {{"s00", 0}, {"s01", 0}, {"s02", 1}};
  const SilhouetteReport report = silhouette(m, c);
  CHECK(report.per_sample.at("s02") == 0.0);
  CHECK(report.per_cluster.at(1) == 0.0);
}

TEST_CASE("silhouette requires two clusters and skips noise") {
  const DistanceMatrix m = from_rows({
      {0.0, 0.1, 0.9},
      {0.1, 0.0, 0.9},
      {0.9, 0.9, 0.0},
  });
  Clustering one;
  one.assignments = {{"s00", 0}, {"s01", 0}};
  one.noise = {"s02"};
  CHECK_THROWS_AS(silhouette(m, one), Error);

  Clustering with_noise;
  with_noise.assignments = {{"s00", 0}, {"s01", 1}};
  with_noise.noise = {"s02"};
  const SilhouetteReport report = silhouette(m, with_noise);
  CHECK(report.per_sample.count("s02") == 0);
  CHECK(report.per_sample.size() == 2);
}

TEST_CASE("silhouette stays within [-1, 1] on random clusterings") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 12);
    std::vector<std::vector<double>> rows(static_cast<size_t>(n),
                                          std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
        rows[static_cast<size_t>(j)][static_cast<size_t>(i)] = v;
      }
    }
    const DistanceMatrix m = from_rows(rows);
    const int k = 2 + static_cast<int>(rng() % 3);
    Clustering c;
    std::vector<int> counts(static_cast<size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      const int cluster = i < k ? i : static_cast<int>(rng() % static_cast<unsigned>(k));
      c.assignments[m.labels()[static_cast<size_t>(i)]] = cluster;
    }
    const SilhouetteReport report = silhouette(m, c);
    for (const auto& [label, s] : report.per_sample) {
      CHECK(s >= -1.0);
      CHECK(s <= 1.0);
    }
    CHECK(report.overall >= -1.0);
    CHECK(report.overall <= 1.0);
  }
}

TEST_CASE("diameter and tightness are the max and mean pair distances") {
  // one cluster with pairwise distances {0.1, 0.2, 0.3}
  const DistanceMatrix m = from_rows({
      {0.0, 0.1, 0.2},
      {0.1, 0.0, 0.3},
      {0.2, 0.3, 0.0},
  });
  Clustering c;
  c.assignments = {{"s00", 0}, {"s01", 0}, {"s02", 0}};
  const auto spread = diameter_tightness(m, c);
  CHECK(spread.at(0).diameter == doctest::Approx(0.3));
  CHECK(spread.at(0).tightness == doctest::Approx(0.2));

  SUBCASE("isomorphic duplicates give diameter zero") {
    const DistanceMatrix dup = from_rows({
        {0.0, 0.0},
        {0.0, 0.0},
    });
    Clustering c2;
    c2.assignments = {{"s00", 0}, {"s01", 0}};
    CHECK(diameter_tightness(dup, c2).at(0) == ClusterSpread{0.0, 0.0});
  }
  SUBCASE("singletons are (0, 0)") {
    Clustering single;
    single.assignments = {{"s00", 0}, {"s01", 1}, {"s02", 1}};
    CHECK(diameter_tightness(m, single).at(0) == ClusterSpread{0.0, 0.0});
  }
  SUBCASE("diameter >= tightness always") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 8);
      std::vector<std::vector<double>> rows(static_cast<size_t>(n),
                                            std::vector<double>(static_cast<size_t>(n), 0.0));
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
          rows[static_cast<size_t>(j)][static_cast<size_t>(i)] = v;
        }
      }
      const DistanceMatrix rm = from_rows(rows);
      Clustering rc;
      for (int i = 0; i < n; ++i) {
        rc.assignments[rm.labels()[static_cast<size_t>(i)]] =
            static_cast<int>(rng() % 2);
      }
      if (rc.cluster_count() < 2) continue;
      for (const auto& [cluster, sp] : diameter_tightness(rm, rc)) {
        CHECK(sp.diameter >= sp.tightness);
      }
    }
  }
}

TEST_CASE("kdist curve is the sorted distance to the k-th neighbor") {
  SUBCASE("identical samples") {
    const DistanceMatrix m = from_rows({
        {0.0, 0.0, 0.0},
        {0.0, 0.0, 0.0},
        {0.0, 0.0, 0.0},
    });
    CHECK(kdist_curve(m, 1) == std::vector<double>{0.0, 0.0, 0.0});
  }
  SUBCASE("two blocks of two") {
    const DistanceMatrix m = from_rows({
        {0.0, 0.1, 0.9, 0.9},
        {0.1, 0.0, 0.9, 0.9},
        {0.9, 0.9, 0.0, 0.1},
        {0.9, 0.9, 0.1, 0.0},
    });
    CHECK(kdist_curve(m, 1) == std::vector<double>{0.1, 0.1, 0.1, 0.1});
    CHECK(kdist_curve(m, 2) == std::vector<double>{0.9, 0.9, 0.9, 0.9});
  }
  SUBCASE("k out of range") {
    const DistanceMatrix m = from_rows({{0.0, 0.5}, {0.5, 0.0}});
    CHECK_THROWS_AS(kdist_curve(m, 0), Error);
    CHECK_THROWS_AS(kdist_curve(m, 2), Error);
  }
  SUBCASE("sorted and in range on random input") {
    std::mt19937_64 rng(33);
    const int n = 10;
    std::vector<std::vector<double>> rows(static_cast<size_t>(n),
                                          std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
        rows[static_cast<size_t>(j)][static_cast<size_t>(i)] = v;
      }
    }
    const DistanceMatrix m = from_rows(rows);
    const auto curve = kdist_curve(m, 3);
    REQUIRE(curve.size() == 10);
    for (size_t i = 0; i < curve.size(); ++i) {
      CHECK(curve[i] >= 0.0);
      CHECK(curve[i] <= 1.0);
      if (i > 0) CHECK(curve[i] >= curve[i - 1]);
    }
  }
}

TEST_CASE("frequency table rows sum to family totals") {
  Clustering c;
  // one family of 17 split 14/1/2 across three clusters
  for (int i = 0; i < 14; ++i) c.assignments["a" + std::to_string(i)] = 0;
  c.assignments["a14"] = 1;
  c.assignments["a15"] = 2;
  c.assignments["a16"] = 2;
  std::map<std::string, std::string> families;
  for (int i = 0; i < 17; ++i) families["a" + std::to_string(i)] = "boa";

  const FrequencyTable table = frequency_table(c, families);
  REQUIRE(table.families == std::vector<std::string>{"boa"});
  CHECK(table.counts[0] == std::vector<std::int64_t>{14, 1, 2});
  CHECK(table.noise_counts[0] == 0);
  CHECK(table.family_totals.at("boa") == 17);

  SUBCASE("noise lands in the noise column") {
    Clustering noisy;
    noisy.noise = {"a0", "a1"};
    noisy.assignments["a2"] = 0;
    std::map<std::string, std::string> fams{{"a0", "f"}, {"a1", "f"}, {"a2", "f"}};
    const FrequencyTable t = frequency_table(noisy, fams);
    CHECK(t.noise_counts[0] == 2);
    CHECK(t.family_totals.at("f") == 3);
  }
  SUBCASE("missing family label is an error") {
    std::map<std::string, std::string> incomplete;
    CHECK_THROWS_AS(frequency_table(c, incomplete), Error);
  }
  SUBCASE("column sums match cluster sizes") {
    std::int64_t col0 = 0;
    for (size_t f = 0; f < table.families.size(); ++f) col0 += table.counts[f][0];
    CHECK(col0 == 14);
  }
}

TEST_CASE("purity is the majority fraction over clustered samples") {
  SUBCASE("single mixed cluster") {
    Clustering c;
    std::map<std::string, std::string> families;
    // 86% / 7% / 7% mix in one cluster of 14 + 1 + 1... use counts 12/1/1
    for (int i = 0; i < 12; ++i) {
      c.assignments["c" + std::to_string(i)] = 0;
      families["c" + std::to_string(i)] = "ceeinject";
    }
    c.assignments["r0"] = 0;
    families["r0"] = "runonce";
    c.assignments["n0"] = 0;
    families["n0"] = "neeris";
    CHECK(cluster_purity(c, families) == doctest::Approx(12.0 / 14.0));
  }
  SUBCASE("perfect recovery scores 1") {
    Clustering c;
    c.assignments = {{"x", 0}, {"y", 0}, {"z", 1}};
    std::map<std::string, std::string> families{{"x", "a"}, {"y", "a"}, {"z", "b"}};
    CHECK(cluster_purity(c, families) == 1.0);
  }
  SUBCASE("every sample its own cluster scores 1") {
    Clustering c;
    c.assignments = {{"x", 0}, {"y", 1}, {"z", 2}};
    std::map<std::string, std::string> families{{"x", "a"}, {"y", "a"}, {"z", "b"}};
    CHECK(cluster_purity(c, families) == 1.0);
  }
  SUBCASE("no clustered samples is an error") {
    Clustering c;
    c.noise = {"x"};
    std::map<std::string, std::string> families{{"x", "a"}};
    CHECK_THROWS_AS(cluster_purity(c, families), Error);
  }
}
