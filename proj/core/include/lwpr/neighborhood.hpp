#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lwpr/graph.hpp"

namespace lwpr {

// A node of an explored neighborhood.
struct NeighborhoodNode {
  Count mark = 0;
  // Id in the graph the node came from (vertex id, or limit-tree index).
  std::uint64_t origin = 0;
  // Length of the shortest reversed-edge path to the root.
  std::uint32_t depth = 0;

  friend bool operator==(const NeighborhoodNode&, const NeighborhoodNode&) = default;
};

// Finite rooted marked directed graph produced by incoming exploration.
//
// Node 0 is the root; nodes are in discovery order, so depth labels are
// nondecreasing. Edges use local indices and are sorted by (source, target).
struct MarkedNeighborhood {
  std::vector<NeighborhoodNode> nodes;
  std::vector<Edge> edges;
  std::uint32_t depth = 0;

  std::size_t size() const noexcept { return nodes.size(); }
  static constexpr std::uint32_t root = 0;

  friend bool operator==(const MarkedNeighborhood&, const MarkedNeighborhood&) = default;
};

// Breadth-first exploration of in-edges from `root` for `k` steps, followed by
// every edge whose endpoints were both found.
//
// `marks` defaults to the out-degrees when empty; otherwise it must hold one
// entry per vertex with marks[i] >= d_out(i) (UsageError otherwise).
MarkedNeighborhood explore_neighborhood(const DirectedMultigraph& g, Vertex root, std::uint32_t k,
                                        std::span<const Count> marks = {});

// Restriction to nodes at depth <= k together with all edges among them.
MarkedNeighborhood truncate(const MarkedNeighborhood& nbhd, std::uint32_t k);

// True when every non-root node has exactly one out-edge, of multiplicity 1,
// pointing one level closer to the root, and there are no other edges.
bool is_in_tree(const MarkedNeighborhood& nbhd);

}  // namespace lwpr
