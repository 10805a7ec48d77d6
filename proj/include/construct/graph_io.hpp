#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "construct/graph.hpp"

namespace construct {

inline constexpr int kGraphFileSchemaVersion = 1;

/// Malformed graph-container input. Carries the 1-based line and offending field.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, std::string field, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Newline-delimited JSON graph container.
///
/// Optional header line: {"b": int, "c": int, "count": int, "schema_version": int, "config": {...}}
/// Each record:          {"n": int, "node_labels": [int...], "edges": [[i, j, label], ...]}
/// with i < j and label >= 1; absent pairs are label 0 and are not written.
struct GraphFile {
  LabelSpaces spaces;
  std::vector<LabeledGraph> graphs;
  nlohmann::json config = nlohmann::json::object();
  bool has_header = true;
};

nlohmann::json graph_to_json(const LabeledGraph& g);
LabeledGraph graph_from_json(const nlohmann::json& record, std::size_t line = 0);

GraphFile read_graph_file(std::istream& in);
GraphFile read_graph_file(const std::filesystem::path& path);
void write_graph_file(std::ostream& out, const GraphFile& file);
void write_graph_file(const std::filesystem::path& path, const GraphFile& file);

std::vector<LabeledGraph> read_graphs(const std::filesystem::path& path);
void write_graphs(const std::vector<LabeledGraph>& graphs, const LabelSpaces& spaces,
                  const std::filesystem::path& path);

/// Smallest label spaces that accommodate every graph (at least b = c = 1).
LabelSpaces infer_label_spaces(const std::vector<LabeledGraph>& graphs);

}  // namespace construct
