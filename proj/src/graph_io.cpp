#include "construct/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

namespace construct {

using nlohmann::json;

FormatError::FormatError(std::size_t line, std::string field, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + what),
      line_(line),
      field_(std::move(field)) {}

namespace {

int require_int(const json& obj, const char* field, std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end()) throw FormatError(line, field, "missing");
  if (!it->is_number_integer()) throw FormatError(line, field, "expected integer");
  return it->get<int>();
}

bool is_header(const json& obj) { return obj.is_object() && obj.contains("b") && !obj.contains("n"); }

}  // namespace

json graph_to_json(const LabeledGraph& g) {
  json edges = json::array();
  for (const auto& [p, label] : g.edges()) edges.push_back({p.i, p.j, label});
  return json{{"n", g.num_nodes()}, {"node_labels", g.node_labels()}, {"edges", std::move(edges)}};
}

LabeledGraph graph_from_json(const json& record, std::size_t line) {
  if (!record.is_object()) throw FormatError(line, "record", "expected JSON object");
  for (const auto& [key, value] : record.items()) {
    if (key != "n" && key != "node_labels" && key != "edges")
      throw FormatError(line, key, "unknown field");
  }
  const int n = require_int(record, "n", line);
  if (n < 0) throw FormatError(line, "n", "negative node count");

  auto labels_it = record.find("node_labels");
  if (labels_it == record.end()) throw FormatError(line, "node_labels", "missing");
  if (!labels_it->is_array()) throw FormatError(line, "node_labels", "expected array");
  if (static_cast<int>(labels_it->size()) != n)
    throw FormatError(line, "node_labels", "length " + std::to_string(labels_it->size()) +
                                               " does not match n=" + std::to_string(n));
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (const auto& v : *labels_it) {
    if (!v.is_number_integer() || v.get<int>() < 0)
      throw FormatError(line, "node_labels", "expected non-negative integers");
    labels.push_back(v.get<int>());
  }
  LabeledGraph g(std::move(labels));

  auto edges_it = record.find("edges");
  if (edges_it == record.end()) throw FormatError(line, "edges", "missing");
  if (!edges_it->is_array()) throw FormatError(line, "edges", "expected array");
  for (const auto& e : *edges_it) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_number_integer())
      throw FormatError(line, "edges", "expected [i, j, label] integer triples");
    const int i = e[0].get<int>(), j = e[1].get<int>(), label = e[2].get<int>();
    if (!(0 <= i && i < j && j < n))
      throw FormatError(line, "edges", "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                           ") must satisfy 0 <= i < j < n");
    if (label < 1) throw FormatError(line, "edges", "edge label must be >= 1");
    if (g.has_edge(i, j))
      throw FormatError(line, "edges", "duplicate pair (" + std::to_string(i) + ", " +
                                           std::to_string(j) + ")");
    g.set_edge(i, j, label);
  }
  return g;
}

LabelSpaces infer_label_spaces(const std::vector<LabeledGraph>& graphs) {
  LabelSpaces s{1, 1};
  for (const auto& g : graphs) {
    for (int label : g.node_labels()) s.node_types = std::max(s.node_types, label + 1);
    for (const auto& [p, label] : g.edges()) s.edge_types = std::max(s.edge_types, label);
  }
  return s;
}

GraphFile read_graph_file(std::istream& in) {
  GraphFile file;
  file.has_header = false;
  std::string text;
  std::size_t line = 0;
  long long declared_count = -1;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw FormatError(line, "json", e.what());
    }
    if (is_header(obj)) {
      if (file.has_header || !file.graphs.empty())
        throw FormatError(line, "b", "header must be the first record");
      for (const auto& [key, value] : obj.items()) {
        if (key != "b" && key != "c" && key != "count" && key != "schema_version" && key != "config")
          throw FormatError(line, key, "unknown header field");
      }
      file.has_header = true;
      file.spaces.node_types = require_int(obj, "b", line);
      file.spaces.edge_types = require_int(obj, "c", line);
      if (file.spaces.node_types < 1) throw FormatError(line, "b", "must be >= 1");
      if (file.spaces.edge_types < 1) throw FormatError(line, "c", "must be >= 1");
      if (obj.contains("count")) declared_count = require_int(obj, "count", line);
      if (obj.contains("schema_version")) {
        const int version = require_int(obj, "schema_version", line);
        if (version != kGraphFileSchemaVersion)
          throw FormatError(line, "schema_version", "unsupported version " + std::to_string(version));
      }
      if (obj.contains("config")) file.config = obj["config"];
      continue;
    }
    LabeledGraph g = graph_from_json(obj, line);
    if (file.has_header) {
      for (int v = 0; v < g.num_nodes(); ++v) {
        if (g.node_label(v) >= file.spaces.node_types)
          throw FormatError(line, "node_labels", "label " + std::to_string(g.node_label(v)) +
                                                     " exceeds b-1=" +
                                                     std::to_string(file.spaces.node_types - 1));
      }
      for (const auto& [p, label] : g.edges()) {
        if (label > file.spaces.edge_types)
          throw FormatError(line, "edges", "label " + std::to_string(label) + " exceeds c=" +
                                               std::to_string(file.spaces.edge_types));
      }
    }
    file.graphs.push_back(std::move(g));
  }
  if (declared_count >= 0 && static_cast<std::size_t>(declared_count) != file.graphs.size())
    throw FormatError(line, "count", "header declares " + std::to_string(declared_count) +
                                         " graphs but file holds " +
                                         std::to_string(file.graphs.size()));
  if (!file.has_header) file.spaces = infer_label_spaces(file.graphs);
  return file;
}

GraphFile read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_graph_file(in);
}

void write_graph_file(std::ostream& out, const GraphFile& file) {
  file.spaces.validate();
  json header{{"b", file.spaces.node_types},
              {"c", file.spaces.edge_types},
              {"count", file.graphs.size()},
              {"schema_version", kGraphFileSchemaVersion}};
  if (!file.config.empty()) header["config"] = file.config;
  out << header.dump() << '\n';
  for (const auto& g : file.graphs) {
    g.validate(file.spaces);
    out << graph_to_json(g).dump() << '\n';
  }
}

void write_graph_file(const std::filesystem::path& path, const GraphFile& file) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_graph_file(out, file);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<LabeledGraph> read_graphs(const std::filesystem::path& path) {
  return read_graph_file(path).graphs;
}

void write_graphs(const std::vector<LabeledGraph>& graphs, const LabelSpaces& spaces,
                  const std::filesystem::path& path) {
  GraphFile file;
  file.spaces = spaces;
  file.graphs = graphs;
  write_graph_file(path, file);
}

}  // namespace construct
