#include "graphfam/simmatrix.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "graphfam/csv.hpp"
#include "graphfam/error.hpp"

namespace graphfam {

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, std::vector<double> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
  for (size_t i = 0; i < labels_.size(); ++i) {
    csv::require_plain_field(labels_[i], "matrix label");
    if (!index_.emplace(labels_[i], static_cast<int>(i)).second) {
      throw Error("duplicate matrix label \"" + labels_[i] + "\"");
    }
  }
  validate();
}

void DistanceMatrix::validate() const {
  const size_t n = labels_.size();
  if (values_.size() != n * n) {
    throw Error("matrix is not square: " + std::to_string(values_.size()) + " values for " +
                std::to_string(n) + " labels");
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double v = values_[i * n + j];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error("matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                    ") out of range [0,1]: " + csv::format_double(v));
      }
      if (i == j && v != 0.0) {
        throw Error("matrix diagonal (" + std::to_string(i) + "," + std::to_string(i) +
                    ") must be 0, got " + csv::format_double(v));
      }
      if (std::abs(v - values_[j * n + i]) > 1e-12) {
        throw Error("matrix asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

int DistanceMatrix::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) throw Error("unknown sample label \"" + std::string(label) + "\"");
  return it->second;
}

std::string DistanceMatrix::to_csv() const {
  std::string out = "label";
  for (const std::string& l : labels_) {
    out += ',';
    out += l;
  }
  out += '\n';
  const size_t n = labels_.size();
  for (size_t i = 0; i < n; ++i) {
    out += labels_[i];
    for (size_t j = 0; j < n; ++j) {
      out += ',';
      out += csv::format_double(values_[i * n + j]);
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix DistanceMatrix::from_csv(const std::string& text) {
  std::vector<std::string> lines = csv::split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("matrix file is empty");

  std::vector<std::string> header = csv::split_line(lines[0]);
  if (header.empty() || header[0] != "label") {
    throw ParseError("line 1: expected header starting with `label`");
  }
  std::vector<std::string> labels(header.begin() + 1, header.end());
  const size_t n = labels.size();
  if (lines.size() - 1 != n) {
    throw ParseError("expected " + std::to_string(n) + " rows, found " +
                     std::to_string(lines.size() - 1));
  }

  std::vector<double> values(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const std::string where = "line " + std::to_string(i + 2);
    std::vector<std::string> fields = csv::split_line(lines[i + 1]);
    if (fields.size() != n + 1) {
      throw ParseError(where + ": expected " + std::to_string(n + 1) + " fields, found " +
                       std::to_string(fields.size()));
    }
    if (fields[0] != labels[i]) {
      throw ParseError(where + ": row label \"" + fields[0] + "\" does not match header \"" +
                       labels[i] + "\"");
    }
    for (size_t j = 0; j < n; ++j) {
      values[i * n + j] = csv::parse_double(fields[j + 1], where);
    }
  }
  try {
    return DistanceMatrix(std::move(labels), std::move(values));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

void DistanceMatrix::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << to_csv();
  if (!out) throw Error("write failed for " + path.string());
}

DistanceMatrix DistanceMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_csv(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::uint64_t pair_seed(std::uint64_t base_seed, std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);  // order-free: reordering the corpus keeps scores
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  auto mix = [&hash](const void* data, size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ULL;
    }
  };
  mix(&base_seed, sizeof(base_seed));
  mix(a.data(), a.size());
  const unsigned char sep = 0x1f;
  mix(&sep, 1);
  mix(b.data(), b.size());
  return hash;
}

DistanceMatrix compute_matrix(const GraphCorpus& corpus, const AnnealConfig& cfg,
                              unsigned workers, int exact_threshold) {
  cfg.validate();
  corpus.validate();
  const size_t n = corpus.graphs.size();
  if (n == 0) throw Error("corpus is empty");

  std::vector<std::pair<int, int>> tasks;
  tasks.reserve(n * (n - 1) / 2);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      tasks.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }

  std::vector<double> values(n * n, 0.0);
  std::atomic<size_t> next{0};
  auto work = [&]() {
    while (true) {
      const size_t t = next.fetch_add(1);
      if (t >= tasks.size()) break;
      const auto [i, j] = tasks[t];
      const CallGraph& gi = corpus.graphs[static_cast<size_t>(i)];
      const CallGraph& gj = corpus.graphs[static_cast<size_t>(j)];
      AnnealConfig pair_cfg = cfg;
      pair_cfg.seed = pair_seed(cfg.seed, gi.label(), gj.label());
      const double sigma = pair_similarity(gi, gj, pair_cfg, exact_threshold);
      values[static_cast<size_t>(i) * n + static_cast<size_t>(j)] = sigma;
      values[static_cast<size_t>(j) * n + static_cast<size_t>(i)] = sigma;
    }
  };

  const unsigned thread_count = std::max(1u, std::min<unsigned>(workers, 256));
  if (thread_count == 1 || tasks.empty()) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  return DistanceMatrix(corpus.labels(), std::move(values));
}

}  // namespace graphfam
