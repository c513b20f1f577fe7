#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewclust/graph.hpp"

namespace skewclust {

enum class EdgeFormat { tsv, pajek };

EdgeFormat parse_edge_format(std::string_view name);

/// A graph read from disk plus the original label of every vertex
/// (labels[i] is the label that was remapped to index i).
struct LoadedGraph {
  Digraph graph;
  std::vector<std::string> labels;
};

/// TSV: "u<TAB>v[<TAB>w]" per line, '#' starts a comment. Labels are
/// remapped to 0..n-1 in numeric order when every label is a nonnegative
/// integer, otherwise in order of first appearance.
///
/// Pajek: "*Vertices N" followed by optional vertex lines, then "*Arcs"
/// with 1-based "u v [w]" lines.
///
/// With `unweighted` every stored edge gets weight 1 after duplicates are
/// merged.
LoadedGraph read_edge_list(std::istream& in, EdgeFormat format, bool unweighted = false);
LoadedGraph load_edge_list(const std::filesystem::path& path, EdgeFormat format,
                           bool unweighted = false);

/// One "u<TAB>v<TAB>w" line per edge, 0-based.
void write_edge_list(std::ostream& out, const Digraph& g);

/// "original_label<TAB>index" per vertex.
void write_label_map(std::ostream& out, const std::vector<std::string>& labels);

/// Two-column "label<TAB>cluster" files (ground truth and partitions).
std::vector<std::pair<std::string, int>> read_assignment(std::istream& in);
std::vector<std::pair<std::string, int>> load_assignment(const std::filesystem::path& path);
void write_assignment(std::ostream& out, const std::vector<std::string>& labels,
                      const std::vector<int>& clusters);

/// Shortest round-trip decimal form of `x` ("1", "0.25", "1e-07").
std::string format_number(double x);

}  // namespace skewclust
