#include "lwpr/limit_tree.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "lwpr/edge_list.hpp"
#include "lwpr/error.hpp"

namespace lwpr {

std::uint32_t LimitTree::height() const { return depth.empty() ? 0 : depth.back(); }

std::vector<std::uint64_t> LimitTree::generation_sizes() const {
  std::vector<std::uint64_t> sizes(depth.empty() ? 0 : height() + 1, 0);
  for (auto d : depth) ++sizes[d];
  return sizes;
}

void LimitTree::clear() {
  parent.clear();
  depth.clear();
  mark.clear();
  in_degree.clear();
  first_child.clear();
  child_count.clear();
  position.clear();
  strength.clear();
  C.clear();
  B.clear();
  birth_time.clear();
  horizon = 0.0;
  depth_limit = kNone;
  root_resamples = 0;
}

std::uint32_t LimitTree::add_node(std::uint32_t parent_index, Count m, Count indeg) {
  const auto id = static_cast<std::uint32_t>(mark.size());
  parent.push_back(parent_index);
  mark.push_back(m);
  in_degree.push_back(indeg);
  first_child.push_back(kNone);
  child_count.push_back(0);
  if (parent_index == kNone) {
    depth.push_back(0);
  } else {
    depth.push_back(depth[parent_index] + 1);
    if (child_count[parent_index] == 0) first_child[parent_index] = id;
    ++child_count[parent_index];
  }
  return id;
}

void LimitTree::validate() const {
  const std::size_t n = size();
  if (n == 0) throw InvariantViolation("limit tree is empty");
  if (parent[0] != kNone || depth[0] != 0) throw InvariantViolation("limit tree root is malformed");
  for (std::size_t v = 1; v < n; ++v) {
    const auto p = parent[v];
    if (p >= v) throw InvariantViolation("limit tree is not in breadth-first order at node " + std::to_string(v));
    if (depth[v] != depth[p] + 1 || depth[v] < depth[v - 1]) {
      throw InvariantViolation("limit tree depth labels broken at node " + std::to_string(v));
    }
    if (v < first_child[p] || v >= first_child[p] + child_count[p]) {
      throw InvariantViolation("limit tree children are not contiguous at node " + std::to_string(v));
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    const bool at_limit = !complete() && depth[v] == depth_limit;
    if (!at_limit && child_count[v] != in_degree[v]) {
      throw InvariantViolation("limit tree child count differs from in-degree at node " + std::to_string(v));
    }
    if (at_limit && child_count[v] != 0) {
      throw InvariantViolation("limit tree has children below its depth limit");
    }
  }
}

MarkedNeighborhood to_neighborhood(const LimitTree& t, std::uint32_t k) {
  MarkedNeighborhood nb;
  nb.depth = k;
  const auto end = static_cast<std::size_t>(
      std::upper_bound(t.depth.begin(), t.depth.end(), k) - t.depth.begin());
  nb.nodes.reserve(end);
  for (std::size_t v = 0; v < end; ++v) nb.nodes.push_back({t.mark[v], v, t.depth[v]});
  // parent < child, so sorting by source is sorting by child index
  for (std::size_t v = 1; v < end; ++v) {
    nb.edges.push_back(Edge{static_cast<Vertex>(v), t.parent[v], 1});
  }
  return nb;
}

DirectedMultigraph to_graph(const LimitTree& t) {
  std::vector<Edge> edges;
  edges.reserve(t.size());
  for (std::size_t v = 1; v < t.size(); ++v) edges.push_back(Edge{static_cast<Vertex>(v), t.parent[v], 1});
  return build_graph(edges, t.size());
}

void write_limit_tree(std::ostream& out, const LimitTree& t) { write_edge_list(out, to_graph(t), t.mark); }

}  // namespace lwpr
