// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/data/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "connectome/common/errors.hpp"

namespace connectome::data {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json header_json(const Dataset& dataset) {
  ordered_json h;
  h["version"] = kDatasetFormatVersion;
  h["num_classes"] = dataset.num_classes;
  h["spec"] = dataset.spec;
  return h;
}

ordered_json graph_json(const ConnectomeGraph& g) {
  ordered_json j;
  j["n"] = g.n;
  j["d"] = g.d;
  j["x"] = g.x;
  auto edges = ordered_json::array();
  for (const auto& e : g.edges) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  j["w"] = g.weights;
  j["y"] = g.label;
  return j;
}

template <typename T>
T field(const ordered_json& j, const char* key, std::size_t line) {
  if (!j.contains(key)) throw ParseError(line, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const ordered_json::exception& e) {
    throw ParseError(line, std::string("field '") + key + "': " + e.what());
  }
}

ConnectomeGraph parse_graph(const ordered_json& j, std::size_t line, int num_classes) {
  if (!j.is_object()) throw ParseError(line, "graph record is not a JSON object");
  ConnectomeGraph g;
  g.n = field<std::size_t>(j, "n", line);
  g.d = field<std::size_t>(j, "d", line);
  g.x = field<std::vector<double>>(j, "x", line);
  g.weights = field<std::vector<double>>(j, "w", line);
  g.label = field<int>(j, "y", line);
  const auto pairs = field<std::vector<std::vector<std::int64_t>>>(j, "edges", line);

  if (g.x.size() != g.n * g.d) {
    throw ParseError(line, "'x' has " + std::to_string(g.x.size()) + " values, expected n*d = " +
                               std::to_string(g.n * g.d));
  }
  if (pairs.size() != g.weights.size()) {
    throw ParseError(line, std::to_string(pairs.size()) + " edges but " + std::to_string(g.weights.size()) +
                               " weights");
  }
  if (g.label < 0 || g.label >= num_classes) {
    throw ParseError(line, "label " + std::to_string(g.label) + " outside [0, " + std::to_string(num_classes) + ")");
  }
  g.edges.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.size() != 2) throw ParseError(line, "edge entry is not a [u, v] pair");
    auto u = p[0];
    auto v = p[1];
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= g.n || static_cast<std::size_t>(v) >= g.n) {
      throw ParseError(line, "edge [" + std::to_string(u) + ", " + std::to_string(v) + "] outside " +
                                 std::to_string(g.n) + " nodes");
    }
    if (u == v) throw ParseError(line, "self-loop on node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    g.edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
  }
  auto sorted = g.edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ParseError(line, "duplicate edge");
  return g;
}

}  // namespace

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << header_json(dataset).dump() << '\n';
  for (const auto& g : dataset.graphs) out << graph_json(g).dump() << '\n';
}

std::string serialize_dataset(const Dataset& dataset) {
  std::ostringstream out;
  write_dataset(out, dataset);
  return out.str();
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_dataset(out, dataset);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Dataset read_dataset(std::istream& in) {
  Dataset ds;
  std::string text;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!have_header) {
      if (!j.is_object() || !j.contains("version")) throw ParseError(line_no, "missing dataset header");
      const int version = field<int>(j, "version", line_no);
      if (version != kDatasetFormatVersion) {
        throw ParseError(line_no, "unsupported dataset version " + std::to_string(version));
      }
      ds.num_classes = field<int>(j, "num_classes", line_no);
      if (ds.num_classes < 2) throw ParseError(line_no, "num_classes must be >= 2");
      if (j.contains("spec")) ds.spec = j.at("spec");
      have_header = true;
      continue;
    }
    ds.graphs.push_back(parse_graph(j, line_no, ds.num_classes));
  }
  if (!have_header) throw ParseError(line_no, "empty dataset file");
  return ds;
}

Dataset parse_dataset(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_dataset(in);
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  return read_dataset(in);
}

}  // namespace connectome::data
