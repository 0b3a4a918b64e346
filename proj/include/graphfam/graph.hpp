#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graphfam/error.hpp"

namespace graphfam {

enum class FunctionKind { Local, External };

std::string_view to_string(FunctionKind kind);

struct Vertex {
  std::string name;
  FunctionKind kind = FunctionKind::Local;

  bool operator==(const Vertex&) const = default;
};

struct Edge {
  int src = 0;
  int dst = 0;

  auto operator<=>(const Edge&) const = default;
};

// A call graph: functions as vertices, calls as directed edges. Vertex ids
// are dense indices into the vertex list. Immutable after construction, so
// instances can be shared freely across threads.
class CallGraph {
 public:
  CallGraph() = default;

  // Validates on construction: non-empty label, non-empty vertex names,
  // unique external names, edge endpoints in range. Parallel edges in the
  // input are collapsed; edges are stored sorted.
  CallGraph(std::string label, std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::string& label() const { return label_; }
  int order() const { return static_cast<int>(vertices_.size()); }
  int size() const { return static_cast<int>(edges_.size()); }
  bool is_null() const { return vertices_.empty(); }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(int id) const { return vertices_.at(static_cast<size_t>(id)); }
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<int>& out_neighbors(int id) const { return out_.at(static_cast<size_t>(id)); }
  const std::vector<int>& in_neighbors(int id) const { return in_.at(static_cast<size_t>(id)); }
  bool has_edge(int src, int dst) const;

  int external_count() const { return external_count_; }
  int local_count() const { return order() - external_count_; }

  // Id of the external vertex with the given name, if any.
  std::optional<int> find_external(std::string_view name) const;

  bool same_structure(const CallGraph& other) const {
    return vertices_ == other.vertices_ && edges_ == other.edges_;
  }

 private:
  std::string label_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::unordered_set<std::uint64_t> edge_keys_;
  std::unordered_map<std::string, int> external_ids_;
  int external_count_ = 0;
};

struct ParseOptions {
  // Collapse same-named external vertices into one, unioning their edges,
  // instead of failing the parse.
  bool merge_duplicate_externals = false;
  // Label used by the line-oriented format when no `g <label>` line is
  // present (typically the file stem).
  std::string fallback_label;
};

// Parses either the structured JSON format or the line-oriented format
// (detected from the first non-space character).
CallGraph parse_graph(const std::string& file_contents, const ParseOptions& options = {});

// Emits the structured JSON format with sorted edges; byte-stable for a
// given graph.
std::string serialize_graph(const CallGraph& graph);

// One warning per edge from an external function into a local one. Such
// edges break the usual extraction convention but are not errors.
std::vector<std::string> validate_conventions(const CallGraph& graph);

struct GraphStats {
  int order = 0;
  int size = 0;
  int externals = 0;
  int locals = 0;

  bool operator==(const GraphStats&) const = default;
};

GraphStats graph_stats(const CallGraph& graph);

// An ordered set of call graphs, optionally with ground-truth family names.
struct GraphCorpus {
  std::vector<CallGraph> graphs;
  std::optional<std::map<std::string, std::string>> family_labels;

  // Unique labels; family_labels (when present) keyed by exactly the sample
  // labels. Throws Error on violation.
  void validate() const;

  const CallGraph* find(std::string_view label) const;
  std::vector<std::string> labels() const;
};

// Reads every *.json / *.graph / *.txt file in the directory (sorted by
// filename) plus an optional families.csv.
GraphCorpus load_corpus(const std::filesystem::path& dir, const ParseOptions& options = {});

// Writes one <label>.json per graph plus families.csv when labels exist.
void save_corpus(const GraphCorpus& corpus, const std::filesystem::path& dir);

std::map<std::string, std::string> load_family_labels(const std::filesystem::path& file);

}  // namespace graphfam
