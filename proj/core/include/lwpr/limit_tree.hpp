#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "lwpr/graph.hpp"
#include "lwpr/neighborhood.hpp"

namespace lwpr {

// Rooted marked tree sampled from a limit law, stored in breadth-first order
// with each node's children contiguous and in generation order. Node 0 is the
// root. Edges are implicit, child -> parent.
//
// in_degree is the drawn child count; nodes at the truncation depth keep
// their drawn value but have no materialized children (child_count = 0).
struct LimitTree {
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> depth;
  std::vector<Count> mark;
  std::vector<Count> in_degree;
  std::vector<std::uint32_t> first_child;
  std::vector<Count> child_count;

  // Optional per-node columns; empty when the model has none.
  std::vector<double> position;
  std::vector<double> strength;
  std::vector<double> C;
  std::vector<double> B;
  std::vector<double> birth_time;
  // CTBP observation time; 0 for other models.
  double horizon = 0.0;

  // Truncation depth; kNone when the tree was sampled in full.
  std::uint32_t depth_limit = kNone;
  // Root redraws forced by a position floor.
  std::uint32_t root_resamples = 0;

  std::size_t size() const noexcept { return mark.size(); }
  bool complete() const noexcept { return depth_limit == kNone; }
  std::uint32_t height() const;
  // Number of nodes per generation.
  std::vector<std::uint64_t> generation_sizes() const;

  void clear();
  // Appends a node and returns its index; children must be added generation by generation.
  std::uint32_t add_node(std::uint32_t parent_index, Count mark, Count in_degree);
  // Checks the structural invariants, throwing InvariantViolation.
  void validate() const;
};

// Depth-k incoming neighborhood of the root, with the tree's marks.
MarkedNeighborhood to_neighborhood(const LimitTree& t, std::uint32_t k);

// Tree as a graph (child -> parent edges) and its marks.
DirectedMultigraph to_graph(const LimitTree& t);

// Edge-list export with `#m` mark lines.
void write_limit_tree(std::ostream& out, const LimitTree& t);

}  // namespace lwpr
