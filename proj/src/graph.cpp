#include "graphfam/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "graphfam/csv.hpp"

namespace graphfam {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t edge_key(int src, int dst) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(src)) << 32) |
         static_cast<std::uint32_t>(dst);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("write failed for " + path.string());
}

FunctionKind parse_kind(const std::string& text, const std::string& where) {
  if (text == "local") return FunctionKind::Local;
  if (text == "external") return FunctionKind::External;
  throw ParseError(where + ": kind must be \"local\" or \"external\", got \"" + text + "\"");
}

// Raw material collected by either parser before validation.
struct RawGraph {
  std::string label;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
};

// Collapses same-named externals into the first occurrence and re-indexes
// densely, unioning edges.
void merge_duplicate_externals(RawGraph& raw) {
  std::unordered_map<std::string, int> seen_external;
  std::vector<int> remap(raw.vertices.size());
  std::vector<Vertex> merged;
  merged.reserve(raw.vertices.size());
  for (size_t i = 0; i < raw.vertices.size(); ++i) {
    const Vertex& v = raw.vertices[i];
    if (v.kind == FunctionKind::External) {
      auto [it, inserted] = seen_external.emplace(v.name, static_cast<int>(merged.size()));
      if (!inserted) {
        remap[i] = it->second;
        continue;
      }
    }
    remap[i] = static_cast<int>(merged.size());
    merged.push_back(v);
  }
  for (Edge& e : raw.edges) {
    e.src = remap[static_cast<size_t>(e.src)];
    e.dst = remap[static_cast<size_t>(e.dst)];
  }
  raw.vertices = std::move(merged);
}

RawGraph parse_json_graph(const std::string& text, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level: expected an object");

  RawGraph raw;
  if (!doc.contains("label") || !doc["label"].is_string()) {
    throw ParseError("header: missing string field \"label\"");
  }
  raw.label = doc["label"].get<std::string>();

  if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw ParseError("header: missing array field \"vertices\"");
  }
  const json& verts = doc["vertices"];
  raw.vertices.reserve(verts.size());
  for (size_t i = 0; i < verts.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    const json& v = verts[i];
    if (!v.is_object()) throw ParseError(where + ": expected an object");
    if (!v.contains("name") || !v["name"].is_string()) {
      throw ParseError(where + ": missing string field \"name\"");
    }
    if (!v.contains("kind") || !v["kind"].is_string()) {
      throw ParseError(where + ": missing string field \"kind\"");
    }
    raw.vertices.push_back(
        {v["name"].get<std::string>(), parse_kind(v["kind"].get<std::string>(), where)});
  }

  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw ParseError("header: missing array field \"edges\"");
  }
  const json& edges = doc["edges"];
  raw.edges.reserve(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw ParseError(where + ": expected [source_id, target_id]");
    }
    raw.edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  (void)options;
  return raw;
}

RawGraph parse_line_graph(const std::string& text, const ParseOptions& options) {
  RawGraph raw;
  raw.label = options.fallback_label;
  std::unordered_map<long long, int> id_map;  // file id -> dense id
  bool saw_edges = false;
  int lineno = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    const std::string where = "line " + std::to_string(lineno);
    if (tag == "g") {
      std::string label;
      if (!(ls >> label)) throw ParseError(where + ": expected `g <label>`");
      raw.label = label;
    } else if (tag == "v") {
      if (saw_edges) throw ParseError(where + ": vertex line after edge lines");
      long long id = 0;
      std::string name, kind;
      if (!(ls >> id >> name >> kind)) {
        throw ParseError(where + ": expected `v <id> <name> <local|external>`");
      }
      if (!id_map.emplace(id, static_cast<int>(raw.vertices.size())).second) {
        throw ParseError(where + ": duplicate vertex id " + std::to_string(id));
      }
      raw.vertices.push_back({name, parse_kind(kind, where)});
    } else if (tag == "e") {
      saw_edges = true;
      long long src = 0, dst = 0;
      if (!(ls >> src >> dst)) throw ParseError(where + ": expected `e <src> <dst>`");
      auto s = id_map.find(src);
      auto d = id_map.find(dst);
      if (s == id_map.end()) {
        throw ParseError(where + ": edge references unknown vertex " + std::to_string(src));
      }
      if (d == id_map.end()) {
        throw ParseError(where + ": edge references unknown vertex " + std::to_string(dst));
      }
      raw.edges.push_back({s->second, d->second});
    } else {
      throw ParseError(where + ": unknown record type '" + tag + "'");
    }
  }
  if (raw.label.empty()) {
    throw ParseError("missing graph label: add a `g <label>` line or supply a fallback label");
  }
  return raw;
}

}  // namespace

std::string_view to_string(FunctionKind kind) {
  return kind == FunctionKind::Local ? "local" : "external";
}

CallGraph::CallGraph(std::string label, std::vector<Vertex> vertices, std::vector<Edge> edges)
    : label_(std::move(label)), vertices_(std::move(vertices)) {
  if (label_.empty()) throw Error("graph label must not be empty");
  csv::require_plain_field(label_, "graph label");

  const int n = order();
  for (int i = 0; i < n; ++i) {
    const Vertex& v = vertices_[static_cast<size_t>(i)];
    if (v.name.empty()) {
      throw Error("vertex " + std::to_string(i) + ": name must not be empty");
    }
    if (v.kind == FunctionKind::External) {
      bool inserted = external_ids_.emplace(v.name, i).second;
      if (!inserted) {
        throw Error("duplicate external name \"" + v.name + "\" (vertex " + std::to_string(i) +
                    ")");
      }
      ++external_count_;
    }
  }

  out_.resize(static_cast<size_t>(n));
  in_.resize(static_cast<size_t>(n));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw Error("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                  ") references a vertex outside 0.." + std::to_string(n - 1));
    }
    edges_.push_back(e);
    out_[static_cast<size_t>(e.src)].push_back(e.dst);
    in_[static_cast<size_t>(e.dst)].push_back(e.src);
    edge_keys_.insert(edge_key(e.src, e.dst));
  }
}

bool CallGraph::has_edge(int src, int dst) const {
  return edge_keys_.count(edge_key(src, dst)) != 0;
}

std::optional<int> CallGraph::find_external(std::string_view name) const {
  auto it = external_ids_.find(std::string(name));
  if (it == external_ids_.end()) return std::nullopt;
  return it->second;
}

CallGraph parse_graph(const std::string& file_contents, const ParseOptions& options) {
  size_t first = file_contents.find_first_not_of(" \t\r\n");
  RawGraph raw = (first != std::string::npos && file_contents[first] == '{')
                     ? parse_json_graph(file_contents, options)
                     : parse_line_graph(file_contents, options);
  if (options.merge_duplicate_externals) merge_duplicate_externals(raw);
  try {
    return CallGraph(std::move(raw.label), std::move(raw.vertices), std::move(raw.edges));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_graph(const CallGraph& graph) {
  ordered_json doc;
  doc["label"] = graph.label();
  ordered_json verts = ordered_json::array();
  for (const Vertex& v : graph.vertices()) {
    verts.push_back({{"name", v.name}, {"kind", std::string(to_string(v.kind))}});
  }
  doc["vertices"] = std::move(verts);
  ordered_json edges = ordered_json::array();
  for (const Edge& e : graph.edges()) {  // already sorted
    edges.push_back({e.src, e.dst});
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

std::vector<std::string> validate_conventions(const CallGraph& graph) {
  std::vector<std::string> warnings;
  for (const Edge& e : graph.edges()) {
    const Vertex& src = graph.vertex(e.src);
    const Vertex& dst = graph.vertex(e.dst);
    if (src.kind == FunctionKind::External && dst.kind == FunctionKind::Local) {
      warnings.push_back("external function \"" + src.name + "\" calls local function \"" +
                         dst.name + "\"");
    }
  }
  return warnings;
}

GraphStats graph_stats(const CallGraph& graph) {
  return {graph.order(), graph.size(), graph.external_count(), graph.local_count()};
}

void GraphCorpus::validate() const {
  std::set<std::string> seen;
  for (const CallGraph& g : graphs) {
    if (!seen.insert(g.label()).second) {
      throw Error("duplicate sample label \"" + g.label() + "\" in corpus");
    }
  }
  if (family_labels) {
    for (const auto& [label, family] : *family_labels) {
      if (!seen.count(label)) {
        throw Error("family label for unknown sample \"" + label + "\"");
      }
      if (family.empty()) throw Error("empty family name for sample \"" + label + "\"");
    }
    for (const std::string& label : seen) {
      if (!family_labels->count(label)) {
        throw Error("sample \"" + label + "\" missing from family labels");
      }
    }
  }
}

const CallGraph* GraphCorpus::find(std::string_view label) const {
  for (const CallGraph& g : graphs) {
    if (g.label() == label) return &g;
  }
  return nullptr;
}

std::vector<std::string> GraphCorpus::labels() const {
  std::vector<std::string> out;
  out.reserve(graphs.size());
  for (const CallGraph& g : graphs) out.push_back(g.label());
  return out;
}

GraphCorpus load_corpus(const std::filesystem::path& dir, const ParseOptions& options) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(dir.string() + " is not a directory");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    std::string ext = p.extension().string();
    if (ext != ".json" && ext != ".graph" && ext != ".txt") continue;
    const std::string name = p.filename().string();
    if (name == "manifest.json" || name.ends_with(".manifest.json")) continue;
    files.push_back(p);
  }
  std::sort(files.begin(), files.end());

  GraphCorpus corpus;
  for (const fs::path& p : files) {
    ParseOptions opts = options;
    opts.fallback_label = p.stem().string();
    try {
      corpus.graphs.push_back(parse_graph(read_file(p), opts));
    } catch (const Error& e) {
      throw ParseError(p.string() + ": " + e.what());
    }
  }

  fs::path families = dir / "families.csv";
  if (fs::exists(families)) {
    corpus.family_labels = load_family_labels(families);
  }
  corpus.validate();
  return corpus;
}

void save_corpus(const GraphCorpus& corpus, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  corpus.validate();
  fs::create_directories(dir);
  for (const CallGraph& g : corpus.graphs) {
    write_file(dir / (g.label() + ".json"), serialize_graph(g));
  }
  if (corpus.family_labels) {
    std::string out = "label,family\n";
    for (const auto& [label, family] : *corpus.family_labels) {
      csv::require_plain_field(family, "family name");
      out += label + "," + family + "\n";
    }
    write_file(dir / "families.csv", out);
  }
}

std::map<std::string, std::string> load_family_labels(const std::filesystem::path& file) {
  std::string text = read_file(file);
  std::vector<std::string> lines = csv::split_lines(text);
  if (lines.empty()) throw ParseError(file.string() + ": empty file");
  if (lines[0] != "label,family") {
    throw ParseError(file.string() + ": line 1: expected header `label,family`");
  }
  std::map<std::string, std::string> labels;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = csv::split_line(lines[i]);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(file.string() + ": line " + std::to_string(i + 1) +
                       ": expected `label,family`");
    }
    if (!labels.emplace(fields[0], fields[1]).second) {
      throw ParseError(file.string() + ": line " + std::to_string(i + 1) +
                       ": duplicate label \"" + fields[0] + "\"");
    }
  }
  return labels;
}

}  // namespace graphfam
