// graphfam: call-graph similarity and family clustering over files.
//
// Subcommands cover the whole pipeline: validate graph files, build the
// pairwise similarity matrix, cluster it (k-medoids or DBSCAN), score the
// result, sweep parameters, and generate synthetic corpora with planted
// families. Every command that writes files also writes a manifest
// recording the resolved configuration.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphfam/anneal.hpp"
#include "graphfam/clustering.hpp"
#include "graphfam/csv.hpp"
#include "graphfam/error.hpp"
#include "graphfam/exact.hpp"
#include "graphfam/graph.hpp"
#include "graphfam/quality.hpp"
#include "graphfam/simmatrix.hpp"
#include "graphfam/synth.hpp"
#include "graphfam/version.hpp"

#include "../src/anneal_impl.hpp"  // detail::mix_seed for restart seeds

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace graphfam;

namespace {

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Resolves the seed contract: an explicit seed is used as-is, otherwise one
// is drawn and printed so the run can be reproduced.
std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_value) {
  if (seed_opt->count() > 0) return seed_value;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cout << "seed: " << seed << "\n";
  return seed;
}

struct Manifest {
  ordered_json doc;

  explicit Manifest(const std::string& subcommand) {
    doc["tool"] = "graphfam";
    doc["version"] = kVersion;
    doc["subcommand"] = subcommand;
    doc["inputs"] = ordered_json::object();
    doc["outputs"] = ordered_json::object();
    doc["config"] = ordered_json::object();
  }

  void write(const fs::path& path) const { write_text(path, doc.dump(2) + "\n"); }
};

// `key=value` lines, `#` comments; used for the annealing schedule.
std::map<std::string, std::string> parse_config_file(const fs::path& path) {
  std::map<std::string, std::string> entries;
  int lineno = 0;
  for (const std::string& line : csv::split_lines(read_text(path))) {
    ++lineno;
    const size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(path.string() + ": line " + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const size_t a = s.find_first_not_of(" \t");
      const size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error(path.string() + ": line " + std::to_string(lineno) + ": empty key");
    }
    entries[key] = value;
  }
  return entries;
}

double config_double(const std::string& key, const std::string& value) {
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    throw Error("config key " + key + ": not a number: '" + value + "'");
  }
}

std::uint64_t config_uint(const std::string& key, const std::string& value) {
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    throw Error("config key " + key + ": not an integer: '" + value + "'");
  }
}

// Shared annealing-schedule flags; steps 0 selects the size-derived default.
// Command-line flags win over config-file entries, which win over defaults.
struct AnnealFlags {
  double initial_temperature = 1.0;
  double cooling_factor = 0.95;
  std::uint64_t steps_per_temperature = 0;
  double minimum_temperature = 1e-3;
  std::uint32_t restarts = 3;

  CLI::Option* initial_temperature_opt = nullptr;
  CLI::Option* cooling_factor_opt = nullptr;
  CLI::Option* steps_opt = nullptr;
  CLI::Option* minimum_temperature_opt = nullptr;
  CLI::Option* restarts_opt = nullptr;

  void attach(CLI::App* cmd) {
    initial_temperature_opt =
        cmd->add_option("--initial-temperature", initial_temperature,
                        "Start temperature, scaled by the initial matching cost");
    cooling_factor_opt =
        cmd->add_option("--cooling-factor", cooling_factor, "Geometric cooling factor in (0,1)");
    steps_opt = cmd->add_option("--steps-per-temperature", steps_per_temperature,
                                "Moves per temperature level (0 = 8x free slots)");
    minimum_temperature_opt =
        cmd->add_option("--minimum-temperature", minimum_temperature, "Stop temperature");
    restarts_opt =
        cmd->add_option("--restarts", restarts, "Independent annealing restarts per pair");
  }

  // Returns the leftover entries (keys this struct does not own).
  std::map<std::string, std::string> apply_config(
      const std::map<std::string, std::string>& entries) {
    std::map<std::string, std::string> rest;
    for (const auto& [key, value] : entries) {
      if (key == "initial-temperature") {
        if (initial_temperature_opt->count() == 0) {
          initial_temperature = config_double(key, value);
        }
      } else if (key == "cooling-factor") {
        if (cooling_factor_opt->count() == 0) cooling_factor = config_double(key, value);
      } else if (key == "steps-per-temperature") {
        if (steps_opt->count() == 0) steps_per_temperature = config_uint(key, value);
      } else if (key == "minimum-temperature") {
        if (minimum_temperature_opt->count() == 0) {
          minimum_temperature = config_double(key, value);
        }
      } else if (key == "restarts") {
        if (restarts_opt->count() == 0) {
          restarts = static_cast<std::uint32_t>(config_uint(key, value));
        }
      } else {
        rest[key] = value;
      }
    }
    return rest;
  }

  AnnealConfig resolve(std::uint64_t seed) const {
    AnnealConfig cfg;
    cfg.initial_temperature = initial_temperature;
    cfg.cooling_factor = cooling_factor;
    if (steps_per_temperature > 0) {
      cfg.steps_per_temperature = static_cast<std::uint32_t>(steps_per_temperature);
    }
    cfg.minimum_temperature = minimum_temperature;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }

  void echo(ordered_json& out) const {
    out["initial_temperature"] = initial_temperature;
    out["cooling_factor"] = cooling_factor;
    out["steps_per_temperature"] =
        steps_per_temperature > 0 ? ordered_json(steps_per_temperature) : ordered_json("auto");
    out["minimum_temperature"] = minimum_temperature;
    out["restarts"] = restarts;
  }
};

std::vector<fs::path> expand_graph_paths(const std::vector<std::string>& paths) {
  std::vector<fs::path> files;
  for (const std::string& raw : paths) {
    fs::path p(raw);
    if (fs::is_directory(p)) {
      std::vector<fs::path> inside;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        if (ext != ".json" && ext != ".graph" && ext != ".txt") continue;
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json" || name.ends_with(".manifest.json")) continue;
        inside.push_back(entry.path());
      }
      std::sort(inside.begin(), inside.end());
      files.insert(files.end(), inside.begin(), inside.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

// ---------------------------------------------------------------- validate

int run_validate(const std::vector<std::string>& paths, bool merge_externals) {
  const std::vector<fs::path> files = expand_graph_paths(paths);
  if (files.empty()) throw Error("no graph files found");
  bool all_ok = true;
  for (const fs::path& file : files) {
    ParseOptions opts;
    opts.merge_duplicate_externals = merge_externals;
    opts.fallback_label = file.stem().string();
    try {
      const CallGraph g = parse_graph(read_text(file), opts);
      const GraphStats stats = graph_stats(g);
      std::cout << file.string() << ": OK label=" << g.label() << " order=" << stats.order
                << " size=" << stats.size << " externals=" << stats.externals
                << " locals=" << stats.locals << "\n";
      for (const std::string& warning : validate_conventions(g)) {
        std::cout << file.string() << ": warning: " << warning << "\n";
      }
    } catch (const Error& e) {
      std::cout << file.string() << ": ERROR: " << e.what() << "\n";
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}

// --------------------------------------------------------------- simmatrix

struct SimmatrixArgs {
  std::string corpus_dir;
  std::string out_path;
  std::string config_path;
  unsigned workers = 1;
  bool exact = false;
  int exact_threshold = kDefaultExactOrderLimit;
  bool merge_externals = false;
  std::uint64_t seed = 0;
  AnnealFlags anneal;
};

int run_simmatrix(SimmatrixArgs& args, const CLI::Option* seed_opt) {
  std::optional<std::uint64_t> config_seed;
  if (!args.config_path.empty()) {
    auto rest = args.anneal.apply_config(parse_config_file(args.config_path));
    for (const auto& [key, value] : rest) {
      if (key == "seed") {
        config_seed = config_uint(key, value);
      } else {
        throw Error(args.config_path + ": unknown config key '" + key + "'");
      }
    }
  }
  std::uint64_t seed = 0;
  if (seed_opt->count() > 0) {
    seed = args.seed;
  } else if (config_seed) {
    seed = *config_seed;
  } else {
    seed = resolve_seed(seed_opt, args.seed);
  }
  const AnnealConfig cfg = args.anneal.resolve(seed);
  const int threshold = args.exact ? 1 << 20 : args.exact_threshold;

  Manifest manifest("simmatrix");
  manifest.doc["seed"] = seed;
  manifest.doc["inputs"]["corpus"] = args.corpus_dir;
  manifest.doc["outputs"]["matrix"] = args.out_path;
  auto& conf = manifest.doc["config"];
  conf["workers"] = args.workers;
  conf["exact"] = args.exact;
  conf["exact_threshold"] = threshold;
  conf["merge_duplicate_externals"] = args.merge_externals;
  args.anneal.echo(conf);
  manifest.write(fs::path(args.out_path).string() + ".manifest.json");

  ParseOptions opts;
  opts.merge_duplicate_externals = args.merge_externals;
  const GraphCorpus corpus = load_corpus(args.corpus_dir, opts);
  const DistanceMatrix matrix = compute_matrix(corpus, cfg, args.workers, threshold);
  matrix.save(args.out_path);
  std::cout << "wrote " << args.out_path << " (" << matrix.size() << "x" << matrix.size()
            << ")\n";
  return 0;
}

// ----------------------------------------------------------------- cluster

std::vector<std::string> read_label_lines(const fs::path& path) {
  std::vector<std::string> labels;
  for (const std::string& line : csv::split_lines(read_text(path))) {
    if (line.empty() || line[0] == '#') continue;
    labels.push_back(line);
  }
  return labels;
}

struct KMedoidsArgs {
  std::string matrix_path;
  std::string out_dir;
  int k = 0;
  std::string init = "random";
  int restarts = 1;
  int max_iterations = 100;
  std::uint64_t seed = 0;
};

KMedoidsConfig make_kmedoids_config(const std::string& init_spec, const DistanceMatrix& matrix,
                                    int k, int max_iterations) {
  KMedoidsConfig cfg;
  cfg.k = k;
  cfg.max_iterations = max_iterations;
  if (init_spec == "random") {
    cfg.init = KMedoidsConfig::Init::Random;
  } else if (init_spec == "plusplus") {
    cfg.init = KMedoidsConfig::Init::PlusPlus;
  } else if (init_spec.starts_with("trained:")) {
    cfg.init = KMedoidsConfig::Init::Trained;
    cfg.trained_medoids = read_label_lines(init_spec.substr(8));
    init_trained(matrix, cfg.trained_medoids);
    if (static_cast<int>(cfg.trained_medoids.size()) != k) {
      throw Error("trained medoid file lists " + std::to_string(cfg.trained_medoids.size()) +
                  " labels but --k is " + std::to_string(k));
    }
  } else {
    throw Error("--init must be random, plusplus or trained:<file>");
  }
  return cfg;
}

int run_kmedoids(const KMedoidsArgs& args, std::uint64_t seed) {
  if (args.restarts < 1) throw Error("--restarts must be positive");
  const fs::path out(args.out_dir);

  Manifest manifest("cluster kmedoids");
  manifest.doc["seed"] = seed;
  manifest.doc["inputs"]["matrix"] = args.matrix_path;
  manifest.doc["outputs"]["assignments"] = (out / "assignments.csv").string();
  manifest.doc["outputs"]["medoids"] = (out / "medoids.csv").string();
  manifest.doc["outputs"]["trace"] = (out / "trace.csv").string();
  auto& conf = manifest.doc["config"];
  conf["k"] = args.k;
  conf["init"] = args.init;
  conf["restarts"] = args.restarts;
  conf["max_iterations"] = args.max_iterations;
  fs::create_directories(out);
  manifest.write(out / "manifest.json");

  const DistanceMatrix matrix = DistanceMatrix::load(args.matrix_path);
  KMedoidsConfig cfg = make_kmedoids_config(args.init, matrix, args.k, args.max_iterations);

  std::optional<KMedoidsResult> best;
  for (int r = 0; r < args.restarts; ++r) {
    cfg.seed = detail::mix_seed(seed, static_cast<std::uint64_t>(r));
    KMedoidsResult result = kmedoids(matrix, cfg);
    if (!best || result.objective < best->objective) best = std::move(result);
  }

  write_text(out / "assignments.csv", assignments_to_csv(best->clustering));
  write_text(out / "medoids.csv", medoids_to_csv(best->clustering));
  std::string trace = "iteration,objective\n";
  for (size_t i = 0; i < best->objective_trace.size(); ++i) {
    trace += std::to_string(i) + "," + csv::format_double(best->objective_trace[i]) + "\n";
  }
  write_text(out / "trace.csv", trace);
  std::cout << "clusters: " << best->clustering.cluster_count()
            << " objective: " << csv::format_double(best->objective) << "\n";
  return 0;
}

struct DbscanArgs {
  std::string matrix_path;
  std::string out_dir;
  int min_pts = -1;
  double rad = -1.0;
  double distance_scale = 1.0;
};

int run_dbscan(const DbscanArgs& args) {
  if (args.distance_scale <= 0) throw Error("--distance-scale must be positive");
  DbscanConfig cfg;
  cfg.min_pts = args.min_pts;
  cfg.rad = args.rad / args.distance_scale;
  cfg.validate();

  const fs::path out(args.out_dir);
  Manifest manifest("cluster dbscan");
  manifest.doc["inputs"]["matrix"] = args.matrix_path;
  manifest.doc["outputs"]["assignments"] = (out / "assignments.csv").string();
  auto& conf = manifest.doc["config"];
  conf["minpts"] = args.min_pts;
  conf["rad"] = args.rad;
  conf["distance_scale"] = args.distance_scale;
  conf["rad_sigma"] = cfg.rad;
  fs::create_directories(out);
  manifest.write(out / "manifest.json");

  const DistanceMatrix matrix = DistanceMatrix::load(args.matrix_path);
  const Clustering clustering = dbscan(matrix, cfg);
  write_text(out / "assignments.csv", assignments_to_csv(clustering));
  std::cout << "clusters: " << clustering.cluster_count() << " noise: " << clustering.noise.size()
            << "\n";
  return 0;
}

// ----------------------------------------------------------------- quality

struct QualityArgs {
  std::string matrix_path;
  std::string clustering_dir;
  std::string families_path;
  std::string out_dir;
  std::vector<int> se = {1, 2};
  bool se_explicit = false;
  double se_scale = 100.0;
  std::vector<int> kdist;
};

int run_quality(const QualityArgs& args) {
  const fs::path out(args.out_dir);
  Manifest manifest("quality");
  manifest.doc["inputs"]["matrix"] = args.matrix_path;
  manifest.doc["inputs"]["clustering"] = args.clustering_dir;
  if (!args.families_path.empty()) manifest.doc["inputs"]["families"] = args.families_path;
  auto& conf = manifest.doc["config"];
  conf["se"] = args.se;
  conf["se_scale"] = args.se_scale;
  conf["kdist"] = args.kdist;
  fs::create_directories(out);
  manifest.write(out / "manifest.json");

  const DistanceMatrix matrix = DistanceMatrix::load(args.matrix_path);
  const fs::path assignments_path = fs::path(args.clustering_dir) / "assignments.csv";
  const fs::path medoids_path = fs::path(args.clustering_dir) / "medoids.csv";
  std::string assignments_csv = read_text(assignments_path);
  std::optional<std::string> medoids_csv;
  if (fs::exists(medoids_path)) medoids_csv = read_text(medoids_path);
  const Clustering clustering =
      clustering_from_csv(assignments_csv, medoids_csv ? &*medoids_csv : nullptr);
  clustering.validate(matrix.labels());

  std::ostringstream summary;
  summary << "samples: " << matrix.size() << "\n";
  summary << "clusters: " << clustering.cluster_count() << "\n";
  summary << "noise: " << clustering.noise.size() << "\n";

  // Sum of error needs medoids; silently skipped for medoid-free
  // clusterings unless explicitly requested.
  if (clustering.has_medoids()) {
    std::string se_csv = "p,scale,value\n";
    for (int p : args.se) {
      const double value = sum_of_error(matrix, clustering, p, args.se_scale);
      se_csv += std::to_string(p) + "," + csv::format_double(args.se_scale) + "," +
                csv::format_double(value) + "\n";
      summary << "SE_" << p << ": " << csv::format_double(value) << "\n";
    }
    write_text(out / "se.csv", se_csv);
  } else if (args.se_explicit) {
    throw Error("--se requires a clustering with medoids");
  } else {
    summary << "SE: skipped (clustering has no medoids)\n";
  }

  const auto spread = diameter_tightness(matrix, clustering);

  std::optional<SilhouetteReport> sil;
  if (clustering.cluster_count() >= 2) {
    sil = silhouette(matrix, clustering);
    summary << "silhouette: " << csv::format_double(sil->overall) << "\n";
    std::string sample_csv = "label,cluster,silhouette\n";
    for (const auto& [label, value] : sil->per_sample) {
      sample_csv +=
          label + "," + std::to_string(clustering.assignments.at(label)) + "," +
          csv::format_double(value) + "\n";
    }
    write_text(out / "silhouette_samples.csv", sample_csv);
  } else {
    summary << "silhouette: skipped (needs at least 2 clusters)\n";
  }

  std::string cluster_csv = "cluster,size,silhouette,diameter,tightness\n";
  std::map<int, std::int64_t> sizes;
  for (const auto& [label, cluster] : clustering.assignments) ++sizes[cluster];
  for (const auto& [cluster, sp] : spread) {
    cluster_csv += std::to_string(cluster) + "," + std::to_string(sizes[cluster]) + ",";
    cluster_csv += sil ? csv::format_double(sil->per_cluster.at(cluster)) : std::string();
    cluster_csv += "," + csv::format_double(sp.diameter) + "," +
                   csv::format_double(sp.tightness) + "\n";
  }
  write_text(out / "cluster_metrics.csv", cluster_csv);

  for (int k : args.kdist) {
    const std::vector<double> curve = kdist_curve(matrix, k);
    std::string curve_csv = "rank,sigma\n";
    for (size_t i = 0; i < curve.size(); ++i) {
      curve_csv += std::to_string(i + 1) + "," + csv::format_double(curve[i]) + "\n";
    }
    write_text(out / ("kdist_" + std::to_string(k) + ".csv"), curve_csv);
  }

  if (!args.families_path.empty()) {
    const auto families = load_family_labels(args.families_path);
    const FrequencyTable table = frequency_table(clustering, families);
    std::string freq_csv = "family,total,noise";
    for (int c : table.cluster_ids) freq_csv += ",c" + std::to_string(c);
    freq_csv += "\n";
    for (size_t f = 0; f < table.families.size(); ++f) {
      freq_csv += table.families[f] + "," +
                  std::to_string(table.family_totals.at(table.families[f])) + "," +
                  std::to_string(table.noise_counts[f]);
      for (std::int64_t count : table.counts[f]) freq_csv += "," + std::to_string(count);
      freq_csv += "\n";
    }
    write_text(out / "frequency.csv", freq_csv);
    if (!clustering.assignments.empty()) {
      const double purity = cluster_purity(clustering, families);
      summary << "purity: " << csv::format_double(purity) << "\n";
    } else {
      summary << "purity: skipped (no clustered samples)\n";
    }
  }

  write_text(out / "summary.txt", summary.str());
  std::cout << summary.str();
  return 0;
}

// ------------------------------------------------------------------- sweep

struct SweepKMedoidsArgs {
  std::string matrix_path;
  std::string out_path;
  int k_min = 2;
  int k_max = 10;
  int repeats = 50;
  std::string init = "random";
  std::vector<int> se = {1, 2};
  double se_scale = 100.0;
  std::uint64_t seed = 0;
};

int run_sweep_kmedoids(const SweepKMedoidsArgs& args, std::uint64_t seed) {
  if (args.k_min < 1 || args.k_max < args.k_min) throw Error("empty k range");
  if (args.repeats < 1) throw Error("--repeats must be positive");
  if (args.init != "random" && args.init != "plusplus") {
    throw Error("--init must be random or plusplus for sweeps");
  }

  Manifest manifest("sweep kmedoids");
  manifest.doc["seed"] = seed;
  manifest.doc["inputs"]["matrix"] = args.matrix_path;
  manifest.doc["outputs"]["sweep"] = args.out_path;
  auto& conf = manifest.doc["config"];
  conf["k_min"] = args.k_min;
  conf["k_max"] = args.k_max;
  conf["repeats"] = args.repeats;
  conf["init"] = args.init;
  conf["se"] = args.se;
  conf["se_scale"] = args.se_scale;
  manifest.write(fs::path(args.out_path).string() + ".manifest.json");

  const DistanceMatrix matrix = DistanceMatrix::load(args.matrix_path);
  if (args.k_max > matrix.size()) throw Error("--k-max exceeds the corpus size");

  std::string csv_out = "k,runs,objective_best,objective_mean,silhouette_best,silhouette_mean,"
                        "silhouette_at_best_objective";
  for (int p : args.se) {
    csv_out += ",se" + std::to_string(p) + "_best,se" + std::to_string(p) + "_at_best_objective";
  }
  csv_out += "\n";

  KMedoidsConfig cfg;
  cfg.init = args.init == "random" ? KMedoidsConfig::Init::Random : KMedoidsConfig::Init::PlusPlus;
  for (int k = args.k_min; k <= args.k_max; ++k) {
    cfg.k = k;
    double best_objective = 0.0;
    double objective_sum = 0.0;
    double best_sil = 0.0, sil_sum = 0.0, sil_at_best = 0.0;
    std::map<int, double> best_se, se_at_best;
    bool first = true;
    for (int r = 0; r < args.repeats; ++r) {
      cfg.seed = detail::mix_seed(detail::mix_seed(seed, static_cast<std::uint64_t>(k)),
                                  static_cast<std::uint64_t>(r));
      const KMedoidsResult result = kmedoids(matrix, cfg);
      const double sil_value =
          k >= 2 ? silhouette(matrix, result.clustering).overall
                 : 0.0;
      objective_sum += result.objective;
      sil_sum += sil_value;
      std::map<int, double> se_values;
      for (int p : args.se) {
        se_values[p] = sum_of_error(matrix, result.clustering, p, args.se_scale);
      }
      if (first || result.objective < best_objective) {
        best_objective = result.objective;
        sil_at_best = sil_value;
        se_at_best = se_values;
      }
      if (first || sil_value > best_sil) best_sil = sil_value;
      for (int p : args.se) {
        if (first || se_values[p] < best_se[p]) best_se[p] = se_values[p];
      }
      first = false;
    }
    const double runs = static_cast<double>(args.repeats);
    csv_out += std::to_string(k) + "," + std::to_string(args.repeats) + "," +
               csv::format_double(best_objective) + "," +
               csv::format_double(objective_sum / runs) + ",";
    if (k >= 2) {
      csv_out += csv::format_double(best_sil) + "," + csv::format_double(sil_sum / runs) + "," +
                 csv::format_double(sil_at_best);
    } else {
      csv_out += ",,";  // silhouette undefined for a single cluster
    }
    for (int p : args.se) {
      csv_out += "," + csv::format_double(best_se[p]) + "," + csv::format_double(se_at_best[p]);
    }
    csv_out += "\n";
  }
  write_text(args.out_path, csv_out);
  std::cout << "wrote " << args.out_path << "\n";
  return 0;
}

struct SweepDbscanArgs {
  std::string matrix_path;
  std::string out_path;
  std::vector<int> min_pts;
  std::vector<double> rad;
  double distance_scale = 1.0;
};

int run_sweep_dbscan(const SweepDbscanArgs& args) {
  if (args.min_pts.empty() || args.rad.empty()) throw Error("empty sweep grid");
  if (args.distance_scale <= 0) throw Error("--distance-scale must be positive");

  Manifest manifest("sweep dbscan");
  manifest.doc["inputs"]["matrix"] = args.matrix_path;
  manifest.doc["outputs"]["sweep"] = args.out_path;
  auto& conf = manifest.doc["config"];
  conf["minpts"] = args.min_pts;
  conf["rad"] = args.rad;
  conf["distance_scale"] = args.distance_scale;
  manifest.write(fs::path(args.out_path).string() + ".manifest.json");

  const DistanceMatrix matrix = DistanceMatrix::load(args.matrix_path);
  std::string csv_out = "minpts,rad,clusters,noise,silhouette\n";
  for (int m : args.min_pts) {
    for (double r : args.rad) {
      DbscanConfig cfg;
      cfg.min_pts = m;
      cfg.rad = r / args.distance_scale;
      cfg.validate();
      const Clustering clustering = dbscan(matrix, cfg);
      csv_out += std::to_string(m) + "," + csv::format_double(r) + "," +
                 std::to_string(clustering.cluster_count()) + "," +
                 std::to_string(clustering.noise.size()) + ",";
      if (clustering.cluster_count() >= 2) {
        csv_out += csv::format_double(silhouette(matrix, clustering).overall);
      }
      csv_out += "\n";
    }
  }
  write_text(args.out_path, csv_out);
  std::cout << "wrote " << args.out_path << "\n";
  return 0;
}

// ------------------------------------------------------------------- synth

struct SynthArgs {
  std::string out_dir;
  SynthConfig cfg;
};

int run_synth(const SynthArgs& args, std::uint64_t seed) {
  SynthConfig cfg = args.cfg;
  cfg.seed = seed;
  cfg.validate();

  const fs::path out(args.out_dir);
  Manifest manifest("synth");
  manifest.doc["seed"] = seed;
  manifest.doc["outputs"]["corpus"] = args.out_dir;
  auto& conf = manifest.doc["config"];
  conf["families"] = cfg.families;
  conf["family_size_min"] = cfg.family_size_range.first;
  conf["family_size_max"] = cfg.family_size_range.second;
  conf["order_min"] = cfg.base_order_range.first;
  conf["order_max"] = cfg.base_order_range.second;
  conf["edge_factor"] = cfg.edge_factor;
  conf["external_fraction"] = cfg.external_fraction;
  conf["mutations"] = cfg.mutations_per_generation;
  conf["generational"] = cfg.generational;
  fs::create_directories(out);
  manifest.write(out / "manifest.json");

  const GraphCorpus corpus = generate_corpus(cfg);
  save_corpus(corpus, out);
  std::cout << "wrote " << corpus.graphs.size() << " graphs to " << args.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"call-graph similarity scoring and family clustering"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Parse graph files and report stats");
  std::vector<std::string> validate_paths;
  bool validate_merge = false;
  validate_cmd->add_option("paths", validate_paths, "Graph files or directories")->required();
  validate_cmd->add_flag("--merge-duplicate-externals", validate_merge,
                         "Collapse duplicate external names instead of failing");

  // simmatrix
  auto* sim_cmd = app.add_subcommand("simmatrix", "Compute the pairwise similarity matrix");
  SimmatrixArgs sim_args;
  sim_cmd->add_option("--corpus", sim_args.corpus_dir, "Directory of graph files")->required();
  sim_cmd->add_option("--out", sim_args.out_path, "Output matrix CSV")->required();
  sim_cmd->add_option("--workers", sim_args.workers, "Worker threads (output is identical)");
  sim_cmd->add_flag("--exact", sim_args.exact, "Exhaustive matching for every pair");
  sim_cmd->add_option("--exact-threshold", sim_args.exact_threshold,
                      "Combined order at or below which matching is exhaustive");
  sim_cmd->add_flag("--merge-duplicate-externals", sim_args.merge_externals,
                    "Collapse duplicate external names while parsing");
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_args.seed, "Base seed");
  sim_args.anneal.attach(sim_cmd);
  sim_cmd->add_option("--config", sim_args.config_path,
                      "Key=value config file (flags take precedence)");

  // cluster
  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a similarity matrix");
  cluster_cmd->require_subcommand(1);

  auto* km_cmd = cluster_cmd->add_subcommand("kmedoids", "k-medoids partitioning");
  KMedoidsArgs km_args;
  km_cmd->add_option("--matrix", km_args.matrix_path, "Matrix CSV")->required();
  km_cmd->add_option("--out", km_args.out_dir, "Output directory")->required();
  km_cmd->add_option("--k", km_args.k, "Number of clusters")->required();
  km_cmd->add_option("--init", km_args.init, "random, plusplus or trained:<file>");
  km_cmd->add_option("--restarts", km_args.restarts, "Seeded restarts; lowest objective wins");
  km_cmd->add_option("--max-iterations", km_args.max_iterations, "Iteration cap");
  auto* km_seed_opt = km_cmd->add_option("--seed", km_args.seed, "Base seed");

  auto* db_cmd = cluster_cmd->add_subcommand("dbscan", "Density clustering with noise");
  DbscanArgs db_args;
  db_cmd->add_option("--matrix", db_args.matrix_path, "Matrix CSV")->required();
  db_cmd->add_option("--out", db_args.out_dir, "Output directory")->required();
  db_cmd->add_option("--minpts", db_args.min_pts, "Core-point neighbor threshold (strict)")
      ->required();
  db_cmd->add_option("--rad", db_args.rad, "Neighborhood radius")->required();
  db_cmd->add_option("--distance-scale", db_args.distance_scale,
                     "Divide --rad by this to get sigma units (100 mimics the SE scale)");

  // quality
  auto* quality_cmd = app.add_subcommand("quality", "Score a clustering");
  QualityArgs q_args;
  quality_cmd->add_option("--matrix", q_args.matrix_path, "Matrix CSV")->required();
  quality_cmd->add_option("--clustering", q_args.clustering_dir,
                          "Directory with assignments.csv (and medoids.csv)")
      ->required();
  quality_cmd->add_option("--out", q_args.out_dir, "Output directory")->required();
  quality_cmd->add_option("--families", q_args.families_path, "families.csv with ground truth");
  auto* se_opt = quality_cmd->add_option("--se", q_args.se, "Sum-of-error exponents")
                     ->delimiter(',');
  quality_cmd->add_option("--se-scale", q_args.se_scale, "Distance scale inside SE");
  quality_cmd->add_option("--kdist", q_args.kdist, "k values for k-dist curves")->delimiter(',');

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweeps over a matrix");
  sweep_cmd->require_subcommand(1);

  auto* sweep_km = sweep_cmd->add_subcommand("kmedoids", "Sweep k");
  SweepKMedoidsArgs skm_args;
  sweep_km->add_option("--matrix", skm_args.matrix_path, "Matrix CSV")->required();
  sweep_km->add_option("--out", skm_args.out_path, "Output sweep CSV")->required();
  sweep_km->add_option("--k-min", skm_args.k_min, "Smallest k")->required();
  sweep_km->add_option("--k-max", skm_args.k_max, "Largest k")->required();
  sweep_km->add_option("--repeats", skm_args.repeats, "Clusterings per k");
  sweep_km->add_option("--init", skm_args.init, "random or plusplus");
  sweep_km->add_option("--se", skm_args.se, "Sum-of-error exponents")->delimiter(',');
  sweep_km->add_option("--se-scale", skm_args.se_scale, "Distance scale inside SE");
  auto* sweep_seed_opt = sweep_km->add_option("--seed", skm_args.seed, "Base seed");

  auto* sweep_db = sweep_cmd->add_subcommand("dbscan", "Sweep the (minpts, rad) grid");
  SweepDbscanArgs sdb_args;
  sweep_db->add_option("--matrix", sdb_args.matrix_path, "Matrix CSV")->required();
  sweep_db->add_option("--out", sdb_args.out_path, "Output sweep CSV")->required();
  sweep_db->add_option("--minpts", sdb_args.min_pts, "minpts values")->required()->delimiter(',');
  sweep_db->add_option("--rad", sdb_args.rad, "rad values")->required()->delimiter(',');
  sweep_db->add_option("--distance-scale", sdb_args.distance_scale,
                       "Divide --rad by this to get sigma units");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a planted-family corpus");
  SynthArgs synth_args;
  synth_cmd->add_option("--out", synth_args.out_dir, "Output directory")->required();
  synth_cmd->add_option("--families", synth_args.cfg.families, "Number of families");
  synth_cmd->add_option("--size-min", synth_args.cfg.family_size_range.first, "Smallest family");
  synth_cmd->add_option("--size-max", synth_args.cfg.family_size_range.second, "Largest family");
  synth_cmd->add_option("--order-min", synth_args.cfg.base_order_range.first,
                        "Smallest base order");
  synth_cmd->add_option("--order-max", synth_args.cfg.base_order_range.second,
                        "Largest base order");
  synth_cmd->add_option("--edge-factor", synth_args.cfg.edge_factor, "Edges per vertex");
  synth_cmd->add_option("--external-fraction", synth_args.cfg.external_fraction,
                        "Fraction of external vertices");
  synth_cmd->add_option("--mutations", synth_args.cfg.mutations_per_generation,
                        "Edit operations per derived member");
  synth_cmd->add_flag("--generational", synth_args.cfg.generational,
                      "Mutate the previous member instead of the family base");
  auto* synth_seed_opt = synth_cmd->add_option("--seed", synth_args.cfg.seed, "Base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return run_validate(validate_paths, validate_merge);
    if (*sim_cmd) return run_simmatrix(sim_args, sim_seed_opt);
    if (*km_cmd) return run_kmedoids(km_args, resolve_seed(km_seed_opt, km_args.seed));
    if (*db_cmd) return run_dbscan(db_args);
    if (*quality_cmd) {
      q_args.se_explicit = se_opt->count() > 0;
      return run_quality(q_args);
    }
    if (*sweep_km) {
      return run_sweep_kmedoids(skm_args, resolve_seed(sweep_seed_opt, skm_args.seed));
    }
    if (*sweep_db) return run_sweep_dbscan(sdb_args);
    if (*synth_cmd) return run_synth(synth_args, resolve_seed(synth_seed_opt, synth_args.cfg.seed));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
