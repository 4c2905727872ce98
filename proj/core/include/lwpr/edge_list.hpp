#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lwpr/graph.hpp"

namespace lwpr {

// Parsed edge-list text.
//
// Format: optional header `# n=<count>`, then `<source> <target> [multiplicity]`
// per line with 0-based ids. Blank lines and other `#` lines are ignored,
// except `#m <vertex> <mark>` lines, which carry per-vertex marks.
struct EdgeListData {
  DirectedMultigraph graph;
  // Empty unless the file carried `#m` lines; otherwise one entry per vertex,
  // defaulting to the out-degree where no mark line was given.
  std::vector<Count> marks;
};

EdgeListData read_edge_list(std::istream& in, const std::string& source_name = "<stream>");
EdgeListData read_edge_list(const std::filesystem::path& path);

// Writes the header and one line per distinct pair in (source, target) order.
// Multiplicity is omitted when it is 1. Marks, when given, follow as `#m` lines.
void write_edge_list(std::ostream& out, const DirectedMultigraph& g,
                     std::span<const Count> marks = {});
void write_edge_list(const std::filesystem::path& path, const DirectedMultigraph& g,
                     std::span<const Count> marks = {});

// Single-column numeric CSV reader (header line optional); used for tail files.
std::vector<double> read_value_column(const std::filesystem::path& path,
                                      std::optional<std::string> column = std::nullopt);

// Formats a double with round-trip precision.
std::string format_double(double x);

}  // namespace lwpr
