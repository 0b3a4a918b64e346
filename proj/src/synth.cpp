#include "graphfam/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include "anneal_impl.hpp"  // detail::Rng

namespace graphfam {

namespace {

// Common system-call-like names. Drawing externals from one shared pool
// makes cross-family name overlap (and thus pinned pairs in the matcher)
// a regular occurrence.
constexpr std::array<const char*, 80> kExternalNames = {
    "CreateFileA",        "ReadFile",          "WriteFile",         "CloseHandle",
    "ExitProcess",        "VirtualAlloc",      "VirtualFree",       "GetProcAddress",
    "LoadLibraryA",       "GetModuleHandleA",  "RegOpenKeyExA",     "RegSetValueExA",
    "RegCloseKey",        "RegQueryValueExA",  "send",              "recv",
    "socket",             "connect",           "bind",              "listen",
    "accept",             "closesocket",       "WSAStartup",        "gethostbyname",
    "InternetOpenA",      "InternetOpenUrlA",  "InternetReadFile",  "HttpSendRequestA",
    "CreateProcessA",     "OpenProcess",       "TerminateProcess",  "WriteProcessMemory",
    "ReadProcessMemory",  "CreateRemoteThread", "CreateThread",     "ResumeThread",
    "Sleep",              "GetTickCount",      "GetSystemTime",     "GetTempPathA",
    "GetWindowsDirectoryA", "CopyFileA",       "DeleteFileA",       "MoveFileA",
    "FindFirstFileA",     "FindNextFileA",     "SetFilePointer",    "GetFileSize",
    "CreateMutexA",       "ReleaseMutex",      "WaitForSingleObject", "CreateEventA",
    "SetEvent",           "OpenSCManagerA",    "CreateServiceA",    "StartServiceA",
    "ControlService",     "CryptAcquireContextA", "CryptEncrypt",   "CryptDecrypt",
    "CryptGenKey",        "MessageBoxA",       "wsprintfA",         "lstrcatA",
    "lstrcpyA",           "lstrlenA",          "memcpy",            "memset",
    "malloc",             "free",              "fopen",             "fread",
    "fwrite",             "fclose",            "printf",            "sprintf",
    "strcmp",             "strcpy",            "strlen",            "atoi",
};

// Mutable working form of a graph during generation. Local names are
// placeholders; emission assigns fresh random ones.
struct DraftGraph {
  std::vector<Vertex> vertices;
  std::set<std::pair<int, int>> edges;
  int next_local = 0;

  int order() const { return static_cast<int>(vertices.size()); }

  std::set<std::string> external_names() const {
    std::set<std::string> names;
    for (const Vertex& v : vertices) {
      if (v.kind == FunctionKind::External) names.insert(v.name);
    }
    return names;
  }
};

int rand_range(detail::Rng& rng, int lo, int hi) {  // inclusive bounds
  return lo + static_cast<int>(rng.index(static_cast<size_t>(hi - lo + 1)));
}

// Keeps the extraction convention: external functions never call locals.
bool allowed_edge(const DraftGraph& draft, int src, int dst) {
  return !(draft.vertices[static_cast<size_t>(src)].kind == FunctionKind::External &&
           draft.vertices[static_cast<size_t>(dst)].kind == FunctionKind::Local);
}

std::string fresh_local_name(DraftGraph& draft) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "loc_%04d", draft.next_local++);
  return buf;
}

// A dictionary name not yet used by the draft, or nullopt when exhausted.
std::optional<std::string> unused_external_name(const DraftGraph& draft, detail::Rng& rng) {
  const std::set<std::string> used = draft.external_names();
  std::vector<const char*> candidates;
  for (const char* name : kExternalNames) {
    if (!used.count(name)) candidates.push_back(name);
  }
  if (candidates.empty()) return std::nullopt;
  return std::string(candidates[rng.index(candidates.size())]);
}

DraftGraph random_base(detail::Rng& rng, const SynthConfig& cfg) {
  DraftGraph draft;
  const int order = rand_range(rng, cfg.base_order_range.first, cfg.base_order_range.second);
  int externals = static_cast<int>(std::lround(cfg.external_fraction * order));
  externals = std::min({externals, order, static_cast<int>(kExternalNames.size())});

  // Random positions for the externals; distinct dictionary names.
  std::vector<int> position(static_cast<size_t>(order));
  for (int i = 0; i < order; ++i) position[static_cast<size_t>(i)] = i;
  for (int i = 0; i < externals; ++i) {
    const size_t j = i + rng.index(static_cast<size_t>(order - i));
    std::swap(position[static_cast<size_t>(i)], position[j]);
  }
  std::vector<int> pool(kExternalNames.size());
  for (size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
  for (int i = 0; i < externals; ++i) {
    const size_t j = i + rng.index(pool.size() - static_cast<size_t>(i));
    std::swap(pool[static_cast<size_t>(i)], pool[j]);
  }

  draft.vertices.assign(static_cast<size_t>(order), Vertex{});
  for (int i = 0; i < externals; ++i) {
    draft.vertices[static_cast<size_t>(position[static_cast<size_t>(i)])] = {
        kExternalNames[static_cast<size_t>(pool[static_cast<size_t>(i)])],
        FunctionKind::External};
  }
  for (int i = 0; i < order; ++i) {
    Vertex& v = draft.vertices[static_cast<size_t>(i)];
    if (v.name.empty()) v = {fresh_local_name(draft), FunctionKind::Local};
  }

  const long long max_edges = static_cast<long long>(order) * order;
  long long target = std::llround(cfg.edge_factor * order);
  target = std::min(target, max_edges);
  long long attempts = 0;
  while (static_cast<long long>(draft.edges.size()) < target && attempts < 100 * target + 100) {
    ++attempts;
    const int u = static_cast<int>(rng.index(static_cast<size_t>(order)));
    const int v = static_cast<int>(rng.index(static_cast<size_t>(order)));
    if (allowed_edge(draft, u, v)) draft.edges.insert({u, v});
  }
  return draft;
}

enum class EditOp { VertexInsert, VertexDelete, EdgeInsert, EdgeDelete, ExternalRelabel };

// Applies one random edit operation; returns its cost in edit-distance
// units (vertex delete pays 1 plus the degree, an external relabel pays 2
// because both sides of the matched pair count as mismatched).
std::int64_t apply_random_edit(DraftGraph& draft, detail::Rng& rng, const SynthConfig& cfg) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    const auto op = static_cast<EditOp>(rng.index(5));
    switch (op) {
      case EditOp::VertexInsert: {
        Vertex v;
        if (rng.unit() < cfg.external_fraction) {
          if (auto name = unused_external_name(draft, rng)) {
            v = {*name, FunctionKind::External};
          } else {
            v = {fresh_local_name(draft), FunctionKind::Local};
          }
        } else {
          v = {fresh_local_name(draft), FunctionKind::Local};
        }
        draft.vertices.push_back(std::move(v));
        return 1;
      }
      case EditOp::VertexDelete: {
        if (draft.order() < 2) continue;
        const int victim = static_cast<int>(rng.index(static_cast<size_t>(draft.order())));
        std::int64_t degree = 0;
        std::set<std::pair<int, int>> kept;
        for (const auto& [src, dst] : draft.edges) {
          if (src == victim || dst == victim) {
            ++degree;
            continue;
          }
          kept.insert({src > victim ? src - 1 : src, dst > victim ? dst - 1 : dst});
        }
        draft.edges = std::move(kept);
        draft.vertices.erase(draft.vertices.begin() + victim);
        return 1 + degree;
      }
      case EditOp::EdgeInsert: {
        const long long max_edges = static_cast<long long>(draft.order()) * draft.order();
        if (static_cast<long long>(draft.edges.size()) >= max_edges) continue;
        for (int tries = 0; tries < 64; ++tries) {
          const int u = static_cast<int>(rng.index(static_cast<size_t>(draft.order())));
          const int v = static_cast<int>(rng.index(static_cast<size_t>(draft.order())));
          if (allowed_edge(draft, u, v) && draft.edges.insert({u, v}).second) return 1;
        }
        continue;
      }
      case EditOp::EdgeDelete: {
        if (draft.edges.empty()) continue;
        auto it = draft.edges.begin();
        std::advance(it, static_cast<long>(rng.index(draft.edges.size())));
        draft.edges.erase(it);
        return 1;
      }
      case EditOp::ExternalRelabel: {
        std::vector<int> externals;
        for (int i = 0; i < draft.order(); ++i) {
          if (draft.vertices[static_cast<size_t>(i)].kind == FunctionKind::External) {
            externals.push_back(i);
          }
        }
        if (externals.empty()) continue;
        auto name = unused_external_name(draft, rng);
        if (!name) continue;
        draft.vertices[static_cast<size_t>(externals[rng.index(externals.size())])].name = *name;
        return 2;
      }
    }
  }
  return 0;  // nothing applicable; graph is degenerate
}

CallGraph emit(const DraftGraph& draft, detail::Rng& rng, const std::string& label) {
  std::vector<Vertex> vertices = draft.vertices;
  std::set<std::string> used;
  for (Vertex& v : vertices) {
    if (v.kind != FunctionKind::Local) continue;
    while (true) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "sub_%06llX",
                    static_cast<unsigned long long>(rng.next() & 0xFFFFFF));
      if (used.insert(buf).second) {
        v.name = buf;
        break;
      }
    }
  }
  std::vector<Edge> edges;
  edges.reserve(draft.edges.size());
  for (const auto& [src, dst] : draft.edges) edges.push_back({src, dst});
  return CallGraph(label, std::move(vertices), std::move(edges));
}

}  // namespace

void SynthConfig::validate() const {
  if (families < 1) throw Error("families must be positive");
  if (family_size_range.first < 1 || family_size_range.second < family_size_range.first) {
    throw Error("family_size_range must be a non-empty positive range");
  }
  if (base_order_range.first < 1 || base_order_range.second < base_order_range.first) {
    throw Error("base_order_range must be a non-empty positive range");
  }
  if (edge_factor < 0) throw Error("edge_factor must be non-negative");
  if (external_fraction < 0 || external_fraction > 1) {
    throw Error("external_fraction must be in [0,1]");
  }
  if (mutations_per_generation < 0) throw Error("mutations_per_generation must be non-negative");
}

GraphCorpus generate_corpus(const SynthConfig& cfg) { return generate_corpus(cfg, nullptr); }

GraphCorpus generate_corpus(const SynthConfig& cfg, std::vector<SynthSampleTrace>* trace) {
  cfg.validate();
  GraphCorpus corpus;
  corpus.family_labels.emplace();
  if (trace) trace->clear();

  detail::Rng rng(detail::mix_seed(cfg.seed, 0x53594e54));  // generator stream
  for (int f = 0; f < cfg.families; ++f) {
    char family_name[16];
    std::snprintf(family_name, sizeof(family_name), "fam%02d", f);
    const int members = rand_range(rng, cfg.family_size_range.first, cfg.family_size_range.second);
    DraftGraph base = random_base(rng, cfg);
    DraftGraph parent = base;
    std::int64_t parent_bound = 0;

    for (int s = 0; s < members; ++s) {
      DraftGraph draft = cfg.generational ? parent : base;
      std::int64_t bound = cfg.generational ? parent_bound : 0;
      if (s > 0) {
        for (int m = 0; m < cfg.mutations_per_generation; ++m) {
          bound += apply_random_edit(draft, rng, cfg);
        }
      }
      char label[32];
      std::snprintf(label, sizeof(label), "%s_g%03d", family_name, s);
      corpus.graphs.push_back(emit(draft, rng, label));
      corpus.family_labels->emplace(label, family_name);
      if (trace) trace->push_back({label, family_name, bound});
      if (cfg.generational) {
        parent = std::move(draft);
        parent_bound = bound;
      }
    }
  }
  corpus.validate();
  return corpus;
}

CallGraph rename_locals(const CallGraph& graph, std::uint64_t seed, std::string new_label) {
  detail::Rng rng(seed);
  std::vector<Vertex> vertices = graph.vertices();
  std::set<std::string> used;
  for (const Vertex& v : vertices) {
    if (v.kind == FunctionKind::External) used.insert(v.name);
  }
  for (Vertex& v : vertices) {
    if (v.kind != FunctionKind::Local) continue;
    while (true) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "sub_%06llX",
                    static_cast<unsigned long long>(rng.next() & 0xFFFFFF));
      if (used.insert(buf).second) {
        v.name = buf;
        break;
      }
    }
  }
  return CallGraph(std::move(new_label), std::move(vertices), graph.edges());
}

}  // namespace graphfam
