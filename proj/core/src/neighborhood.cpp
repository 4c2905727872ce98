#include "lwpr/neighborhood.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "lwpr/error.hpp"

namespace lwpr {

MarkedNeighborhood explore_neighborhood(const DirectedMultigraph& g, Vertex root, std::uint32_t k,
                                        std::span<const Count> marks) {
  const std::size_t n = g.num_vertices();
  if (root >= n) throw UsageError("explore_neighborhood: root " + std::to_string(root) + " out of range");
  if (!marks.empty() && marks.size() != n) {
    throw UsageError("explore_neighborhood: marks must have one entry per vertex");
  }
  auto mark_of = [&](Vertex v) -> Count {
    if (marks.empty()) return g.out_degree(v);
    if (marks[v] < g.out_degree(v)) {
      throw UsageError("explore_neighborhood: mark of vertex " + std::to_string(v) +
                       " is below its out-degree");
    }
    return marks[v];
  };

  MarkedNeighborhood nb;
  nb.depth = k;
  std::unordered_map<Vertex, std::uint32_t> local;
  local.emplace(root, 0);
  nb.nodes.push_back({mark_of(root), root, 0});

  std::size_t frontier_begin = 0;
  for (std::uint32_t h = 1; h <= k; ++h) {
    const std::size_t frontier_end = nb.nodes.size();
    if (frontier_begin == frontier_end) break;
    for (std::size_t a = frontier_begin; a < frontier_end; ++a) {
      const auto v = static_cast<Vertex>(nb.nodes[a].origin);
      for (const Arc& arc : g.in_arcs(v)) {
        auto [it, inserted] = local.emplace(arc.vertex, static_cast<std::uint32_t>(nb.nodes.size()));
        if (inserted) nb.nodes.push_back({mark_of(arc.vertex), arc.vertex, h});
      }
    }
    frontier_begin = frontier_end;
  }

  // Every edge between found vertices ends at a found vertex, so scanning the
  // in-rows of found vertices sees all of them.
  for (std::uint32_t t = 0; t < nb.nodes.size(); ++t) {
    for (const Arc& arc : g.in_arcs(static_cast<Vertex>(nb.nodes[t].origin))) {
      auto it = local.find(arc.vertex);
      if (it != local.end()) nb.edges.push_back(Edge{it->second, t, arc.multiplicity});
    }
  }
  std::sort(nb.edges.begin(), nb.edges.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  return nb;
}

MarkedNeighborhood truncate(const MarkedNeighborhood& nbhd, std::uint32_t k) {
  MarkedNeighborhood out;
  out.depth = std::min(k, nbhd.depth);
  std::size_t keep = 0;
  while (keep < nbhd.nodes.size() && nbhd.nodes[keep].depth <= k) ++keep;
  out.nodes.assign(nbhd.nodes.begin(), nbhd.nodes.begin() + static_cast<std::ptrdiff_t>(keep));
  for (const Edge& e : nbhd.edges) {
    if (e.source < keep && e.target < keep) out.edges.push_back(e);
  }
  return out;
}

bool is_in_tree(const MarkedNeighborhood& nbhd) {
  if (nbhd.edges.size() + 1 != nbhd.nodes.size()) return false;
  std::vector<std::uint8_t> has_parent(nbhd.nodes.size(), 0);
  for (const Edge& e : nbhd.edges) {
    if (e.multiplicity != 1 || e.source == MarkedNeighborhood::root) return false;
    if (nbhd.nodes[e.target].depth + 1 != nbhd.nodes[e.source].depth) return false;
    if (has_parent[e.source]++) return false;
  }
  return true;
}

}  // namespace lwpr
