#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lwpr {

using Vertex = std::uint32_t;
using Count = std::uint32_t;

// One directed (source, target) pair with its multiplicity.
struct Edge {
  Vertex source = 0;
  Vertex target = 0;
  Count multiplicity = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Neighbor entry of a compressed adjacency row.
struct Arc {
  Vertex vertex = 0;
  Count multiplicity = 0;
};

// Immutable directed multigraph in compressed in/out adjacency form.
//
// Rows are sorted by neighbor id and hold each distinct pair once with its
// multiplicity e_{j,i}. Self-loops are ordinary edges: a loop at i counts
// toward both d_in(i) and d_out(i).
class DirectedMultigraph {
 public:
  DirectedMultigraph() = default;

  std::size_t num_vertices() const noexcept { return in_degree_.size(); }
  // Total edge multiplicity L = sum of out-degrees.
  std::uint64_t num_edges() const noexcept { return num_edges_; }

  Count in_degree(Vertex v) const { return in_degree_[v]; }
  Count out_degree(Vertex v) const { return out_degree_[v]; }
  std::span<const Count> in_degrees() const noexcept { return in_degree_; }
  std::span<const Count> out_degrees() const noexcept { return out_degree_; }

  // Sources j with e_{j,v} >= 1, ascending.
  std::span<const Arc> in_arcs(Vertex v) const {
    return {in_arcs_.data() + in_offsets_[v], in_arcs_.data() + in_offsets_[v + 1]};
  }
  // Targets j with e_{v,j} >= 1, ascending.
  std::span<const Arc> out_arcs(Vertex v) const {
    return {out_arcs_.data() + out_offsets_[v], out_arcs_.data() + out_offsets_[v + 1]};
  }

  // e_{source,target}; zero when absent.
  Count multiplicity(Vertex source, Vertex target) const;

  // Distinct pairs in (source, target) order.
  std::vector<Edge> edges() const;

  std::size_t num_dangling() const;

  friend class GraphBuilder;

 private:
  std::vector<Count> in_degree_;
  std::vector<Count> out_degree_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<std::size_t> out_offsets_{0};
  std::vector<Arc> in_arcs_;
  std::vector<Arc> out_arcs_;
  std::uint64_t num_edges_ = 0;
};

// Builds a graph from an edge multiset; repeated pairs accumulate.
//
// Throws InputError naming the position of the first entry whose endpoint is
// out of range or whose multiplicity is zero.
DirectedMultigraph build_graph(std::span<const Edge> edges, std::size_t n);

// Same as build_graph, from parallel source/target arrays with unit multiplicity.
DirectedMultigraph build_graph(std::span<const Vertex> sources,
                               std::span<const Vertex> targets, std::size_t n);

}  // namespace lwpr
