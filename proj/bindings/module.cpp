// Python bindings for the core operations: graph parsing, similarity
// scoring, matrix construction, clustering and quality metrics.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "graphfam/anneal.hpp"
#include "graphfam/clustering.hpp"
#include "graphfam/exact.hpp"
#include "graphfam/graph.hpp"
#include "graphfam/quality.hpp"
#include "graphfam/simmatrix.hpp"
#include "graphfam/synth.hpp"
#include "graphfam/version.hpp"

namespace py = pybind11;
using namespace graphfam;

namespace {

CallGraph make_graph(const std::string& label,
                     const std::vector<std::pair<std::string, std::string>>& vertices,
                     const std::vector<std::pair<int, int>>& edges) {
  std::vector<Vertex> verts;
  verts.reserve(vertices.size());
  for (const auto& [name, kind] : vertices) {
    if (kind == "local") {
      verts.push_back({name, FunctionKind::Local});
    } else if (kind == "external") {
      verts.push_back({name, FunctionKind::External});
    } else {
      throw Error("kind must be \"local\" or \"external\", got \"" + kind + "\"");
    }
  }
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [src, dst] : edges) es.push_back({src, dst});
  return CallGraph(label, std::move(verts), std::move(es));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "call-graph similarity scoring and family clustering";
  m.attr("__version__") = kVersion;
  m.attr("DUMMY") = kDummyVertex;
  m.attr("DEFAULT_EXACT_ORDER_LIMIT") = kDefaultExactOrderLimit;

  py::register_exception<Error>(m, "GraphfamError");

  py::enum_<FunctionKind>(m, "FunctionKind")
      .value("LOCAL", FunctionKind::Local)
      .value("EXTERNAL", FunctionKind::External);

  py::class_<Vertex>(m, "Vertex")
      .def_readonly("name", &Vertex::name)
      .def_readonly("kind", &Vertex::kind)
      .def("__repr__", [](const Vertex& v) {
        return "Vertex(" + v.name + ", " + std::string(to_string(v.kind)) + ")";
      });

  py::class_<CallGraph>(m, "CallGraph")
      .def(py::init(&make_graph), py::arg("label"), py::arg("vertices"), py::arg("edges"),
           "vertices: list of (name, 'local'|'external'); edges: list of (src, dst)")
      .def_property_readonly("label", &CallGraph::label)
      .def_property_readonly("order", &CallGraph::order)
      .def_property_readonly("size", &CallGraph::size)
      .def_property_readonly("vertices", &CallGraph::vertices)
      .def_property_readonly("edges",
                             [](const CallGraph& g) {
                               std::vector<std::pair<int, int>> out;
                               for (const Edge& e : g.edges()) out.emplace_back(e.src, e.dst);
                               return out;
                             })
      .def("has_edge", &CallGraph::has_edge)
      .def("__repr__", [](const CallGraph& g) {
        return "CallGraph(" + g.label() + ", order=" + std::to_string(g.order()) +
               ", size=" + std::to_string(g.size()) + ")";
      });

  m.def(
      "parse_graph",
      [](const std::string& text, bool merge_duplicate_externals,
         const std::string& fallback_label) {
        ParseOptions opts;
        opts.merge_duplicate_externals = merge_duplicate_externals;
        opts.fallback_label = fallback_label;
        return parse_graph(text, opts);
      },
      py::arg("text"), py::arg("merge_duplicate_externals") = false,
      py::arg("fallback_label") = std::string());
  m.def("serialize_graph", &serialize_graph);
  m.def("validate_conventions", &validate_conventions);
  m.def("graph_stats", [](const CallGraph& g) {
    const GraphStats s = graph_stats(g);
    return py::make_tuple(s.order, s.size, s.externals, s.locals);
  });

  py::class_<GraphCorpus>(m, "GraphCorpus")
      .def(py::init([](std::vector<CallGraph> graphs,
                       std::optional<std::map<std::string, std::string>> families) {
             GraphCorpus corpus;
             corpus.graphs = std::move(graphs);
             corpus.family_labels = std::move(families);
             corpus.validate();
             return corpus;
           }),
           py::arg("graphs"), py::arg("family_labels") = std::nullopt)
      .def_readonly("graphs", &GraphCorpus::graphs)
      .def_readonly("family_labels", &GraphCorpus::family_labels)
      .def("labels", &GraphCorpus::labels);

  m.def(
      "load_corpus",
      [](const std::filesystem::path& dir, bool merge_duplicate_externals) {
        ParseOptions opts;
        opts.merge_duplicate_externals = merge_duplicate_externals;
        return load_corpus(dir, opts);
      },
      py::arg("dir"), py::arg("merge_duplicate_externals") = false);
  m.def("save_corpus", &save_corpus, py::arg("corpus"), py::arg("dir"));

  py::class_<MatchPair>(m, "MatchPair")
      .def_readonly("left", &MatchPair::left)
      .def_readonly("right", &MatchPair::right);

  py::class_<Matching>(m, "Matching")
      .def_readonly("left_label", &Matching::left_label)
      .def_readonly("right_label", &Matching::right_label)
      .def_readonly("pairs", &Matching::pairs)
      .def("__str__", &matching_to_text);

  py::class_<CostBreakdown>(m, "CostBreakdown")
      .def_readonly("vertex_cost", &CostBreakdown::vertex_cost)
      .def_readonly("edge_cost", &CostBreakdown::edge_cost)
      .def_readonly("relabel_cost", &CostBreakdown::relabel_cost)
      .def_readonly("total", &CostBreakdown::total);

  py::class_<SimilarityScore>(m, "SimilarityScore")
      .def_readonly("sigma", &SimilarityScore::sigma)
      .def_readonly("cost", &SimilarityScore::cost)
      .def_readonly("matching", &SimilarityScore::matching);

  py::class_<AnnealConfig>(m, "AnnealConfig")
      .def(py::init<>())
      .def_readwrite("initial_temperature", &AnnealConfig::initial_temperature)
      .def_readwrite("cooling_factor", &AnnealConfig::cooling_factor)
      .def_readwrite("steps_per_temperature", &AnnealConfig::steps_per_temperature)
      .def_readwrite("minimum_temperature", &AnnealConfig::minimum_temperature)
      .def_readwrite("restarts", &AnnealConfig::restarts)
      .def_readwrite("seed", &AnnealConfig::seed)
      .def("validate", &AnnealConfig::validate);

  m.def("exact_min_ged", &exact_min_ged, py::arg("g"), py::arg("h"),
        py::arg("max_order") = kDefaultExactOrderLimit);
  m.def("anneal_match", &anneal_match, py::arg("g"), py::arg("h"),
        py::arg("cfg") = AnnealConfig{});
  m.def("pair_similarity", &pair_similarity, py::arg("g"), py::arg("h"),
        py::arg("cfg") = AnnealConfig{}, py::arg("exact_threshold") = kDefaultExactOrderLimit,
        py::call_guard<py::gil_scoped_release>());

  py::class_<DistanceMatrix>(m, "DistanceMatrix")
      .def(py::init<std::vector<std::string>, std::vector<double>>(), py::arg("labels"),
           py::arg("values"))
      .def_property_readonly("labels", &DistanceMatrix::labels)
      .def_property_readonly("size", &DistanceMatrix::size)
      .def("at", &DistanceMatrix::at)
      .def("index_of", &DistanceMatrix::index_of)
      .def("to_csv", &DistanceMatrix::to_csv)
      .def_static("from_csv", &DistanceMatrix::from_csv)
      .def("save", &DistanceMatrix::save)
      .def_static("load", &DistanceMatrix::load)
      .def("rows", [](const DistanceMatrix& mtx) {
        std::vector<std::vector<double>> rows;
        const int n = mtx.size();
        rows.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
          std::vector<double> row;
          row.reserve(static_cast<size_t>(n));
          for (int j = 0; j < n; ++j) row.push_back(mtx.at(i, j));
          rows.push_back(std::move(row));
        }
        return rows;
      });

  m.def("pair_seed", &pair_seed);
  m.def("compute_matrix", &compute_matrix, py::arg("corpus"), py::arg("cfg") = AnnealConfig{},
        py::arg("workers") = 1, py::arg("exact_threshold") = kDefaultExactOrderLimit,
        py::call_guard<py::gil_scoped_release>());

  py::class_<Clustering>(m, "Clustering")
      .def(py::init<>())
      .def_readwrite("assignments", &Clustering::assignments)
      .def_readwrite("medoids", &Clustering::medoids)
      .def_readwrite("noise", &Clustering::noise)
      .def("cluster_count", &Clustering::cluster_count)
      .def("validate", &Clustering::validate);

  py::class_<KMedoidsConfig> km_cfg(m, "KMedoidsConfig");
  py::enum_<KMedoidsConfig::Init>(km_cfg, "Init")
      .value("RANDOM", KMedoidsConfig::Init::Random)
      .value("PLUSPLUS", KMedoidsConfig::Init::PlusPlus)
      .value("TRAINED", KMedoidsConfig::Init::Trained);
  km_cfg.def(py::init<>())
      .def_readwrite("k", &KMedoidsConfig::k)
      .def_readwrite("init", &KMedoidsConfig::init)
      .def_readwrite("trained_medoids", &KMedoidsConfig::trained_medoids)
      .def_readwrite("max_iterations", &KMedoidsConfig::max_iterations)
      .def_readwrite("seed", &KMedoidsConfig::seed);

  py::class_<KMedoidsResult>(m, "KMedoidsResult")
      .def_readonly("clustering", &KMedoidsResult::clustering)
      .def_readonly("objective_trace", &KMedoidsResult::objective_trace)
      .def_readonly("objective", &KMedoidsResult::objective);

  m.def("kmedoids", &kmedoids, py::arg("matrix"), py::arg("cfg"));
  m.def("init_random", &init_random);
  m.def("init_plusplus", &init_plusplus);
  m.def("init_trained", &init_trained);

  py::class_<DbscanConfig>(m, "DbscanConfig")
      .def(py::init<>())
      .def_readwrite("min_pts", &DbscanConfig::min_pts)
      .def_readwrite("rad", &DbscanConfig::rad);

  m.def("dbscan", &dbscan, py::arg("matrix"), py::arg("cfg"));
  m.def("assignments_to_csv", &assignments_to_csv);
  m.def("medoids_to_csv", &medoids_to_csv);

  m.def("sum_of_error", &sum_of_error, py::arg("matrix"), py::arg("clustering"), py::arg("p"),
        py::arg("scale") = 100.0);

  py::class_<SilhouetteReport>(m, "SilhouetteReport")
      .def_readonly("overall", &SilhouetteReport::overall)
      .def_readonly("per_cluster", &SilhouetteReport::per_cluster)
      .def_readonly("per_sample", &SilhouetteReport::per_sample);

  m.def("silhouette", &silhouette);

  py::class_<ClusterSpread>(m, "ClusterSpread")
      .def_readonly("diameter", &ClusterSpread::diameter)
      .def_readonly("tightness", &ClusterSpread::tightness);

  m.def("diameter_tightness", &diameter_tightness);
  m.def("kdist_curve", &kdist_curve);

  py::class_<FrequencyTable>(m, "FrequencyTable")
      .def_readonly("families", &FrequencyTable::families)
      .def_readonly("cluster_ids", &FrequencyTable::cluster_ids)
      .def_readonly("counts", &FrequencyTable::counts)
      .def_readonly("noise_counts", &FrequencyTable::noise_counts)
      .def_readonly("family_totals", &FrequencyTable::family_totals);

  m.def("frequency_table", &frequency_table);
  m.def("cluster_purity", &cluster_purity);

  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("families", &SynthConfig::families)
      .def_readwrite("family_size_range", &SynthConfig::family_size_range)
      .def_readwrite("base_order_range", &SynthConfig::base_order_range)
      .def_readwrite("edge_factor", &SynthConfig::edge_factor)
      .def_readwrite("external_fraction", &SynthConfig::external_fraction)
      .def_readwrite("mutations_per_generation", &SynthConfig::mutations_per_generation)
      .def_readwrite("generational", &SynthConfig::generational)
      .def_readwrite("seed", &SynthConfig::seed);

  m.def("generate_corpus", [](const SynthConfig& cfg) { return generate_corpus(cfg); },
        py::arg("cfg"));
  m.def("rename_locals", &rename_locals, py::arg("graph"), py::arg("seed"),
        py::arg("new_label"));
}
