#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "netclust/error.hpp"
#include "netclust/graph.hpp"
#include "netclust/parallel.hpp"

namespace netclust {

// Manifest CSV: header "path,label", one graph per line. Paths are relative
// to the manifest's directory; the label column may be empty or absent.
struct ManifestEntry {
  std::string path;
  std::optional<std::string> label;
};

inline std::vector<ManifestEntry> read_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw InputError("cannot open manifest: " + manifest_path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(manifest_path + ": empty manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "path,label" && line != "path") {
    throw InputError(manifest_path + ": expected header 'path,label', got '" + line + "'");
  }
  std::vector<ManifestEntry> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    ManifestEntry e;
    e.path = line.substr(0, comma);
    if (e.path.empty()) throw InputError(manifest_path + ":" + std::to_string(line_no) + ": empty path");
    if (comma != std::string::npos && comma + 1 < line.size()) e.label = line.substr(comma + 1);
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw InputError(manifest_path + ": manifest lists no graphs");
  return entries;
}

inline void write_manifest(const std::string& manifest_path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(manifest_path);
  if (!out) throw InputError("cannot write manifest: " + manifest_path);
  out << "path,label\n";
  for (const auto& e : entries) out << e.path << ',' << e.label.value_or("") << '\n';
}

// Graphs loaded from a manifest, with labels mapped to 1..K in order of
// first appearance.
struct GraphCollection {
  std::vector<std::string> ids;
  std::vector<std::string> paths;  // resolved file paths
  std::vector<Graph> graphs;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> label_names;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;

  int label_count() const { return static_cast<int>(label_names.size()); }
};

inline GraphCollection load_collection(const std::string& manifest_path, unsigned jobs = 1) {
  const auto entries = read_manifest(manifest_path);
  const auto base = std::filesystem::path(manifest_path).parent_path();
  GraphCollection c;
  std::vector<EdgeListLoad> loads(entries.size());
  for (const auto& e : entries) {
    c.ids.push_back(e.path);
    const auto p = std::filesystem::path(e.path);
    c.paths.push_back((p.is_absolute() ? p : base / p).string());
  }
  parallel_for(entries.size(), jobs, [&](std::size_t i) { loads[i] = load_edge_list(c.paths[i]); });
  for (auto& l : loads) {
    c.self_loops_dropped += l.self_loops_dropped;
    c.duplicates_dropped += l.duplicates_dropped;
    c.graphs.push_back(std::move(l.graph));
  }

  const bool any_label = std::any_of(entries.begin(), entries.end(), [](const auto& e) { return e.label.has_value(); });
  if (any_label) {
    std::unordered_map<std::string, int> index;
    std::vector<int> labels;
    for (const auto& e : entries) {
      if (!e.label) throw InputError(manifest_path + ": labels must be given for every graph or none");
      auto [it, inserted] = index.try_emplace(*e.label, static_cast<int>(c.label_names.size()) + 1);
      if (inserted) c.label_names.push_back(*e.label);
      labels.push_back(it->second);
    }
    c.labels = std::move(labels);
  }
  return c;
}

}  // namespace netclust
