#include "lwpr/graph.hpp"

#include <algorithm>
#include <string>

#include "lwpr/error.hpp"

namespace lwpr {

namespace {

// Counting-sort edges into CSR rows keyed by `key`, merging duplicates.
template <typename Key, typename Other>
void fill_rows(std::span<const Edge> edges, std::size_t n, Key key, Other other,
               std::vector<std::size_t>& offsets, std::vector<Arc>& arcs) {
  std::vector<std::size_t> start(n + 1, 0);
  for (const Edge& e : edges) ++start[key(e) + 1];
  for (std::size_t v = 0; v < n; ++v) start[v + 1] += start[v];

  std::vector<Arc> raw(edges.size());
  std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
  for (const Edge& e : edges) raw[cursor[key(e)]++] = Arc{other(e), e.multiplicity};

  offsets.assign(n + 1, 0);
  arcs.clear();
  arcs.reserve(raw.size());
  for (std::size_t v = 0; v < n; ++v) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(start[v]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(start[v + 1]);
    std::sort(first, last, [](const Arc& a, const Arc& b) { return a.vertex < b.vertex; });
    for (auto it = first; it != last; ++it) {
      if (!arcs.empty() && arcs.size() > offsets[v] && arcs.back().vertex == it->vertex) {
        arcs.back().multiplicity += it->multiplicity;
      } else {
        arcs.push_back(*it);
      }
    }
    offsets[v + 1] = arcs.size();
  }
}

}  // namespace

class GraphBuilder {
 public:
  static DirectedMultigraph build(std::span<const Edge> edges, std::size_t n) {
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Edge& e = edges[k];
      if (e.source >= n || e.target >= n) {
        throw InputError("edge " + std::to_string(k) + " (" + std::to_string(e.source) +
                         " -> " + std::to_string(e.target) + ") has a vertex id outside [0, " +
                         std::to_string(n) + ")");
      }
      if (e.multiplicity == 0) {
        throw InputError("edge " + std::to_string(k) + " has multiplicity 0");
      }
    }
    DirectedMultigraph g;
    g.in_degree_.assign(n, 0);
    g.out_degree_.assign(n, 0);
    for (const Edge& e : edges) {
      g.out_degree_[e.source] += e.multiplicity;
      g.in_degree_[e.target] += e.multiplicity;
      g.num_edges_ += e.multiplicity;
    }
    fill_rows(
        edges, n, [](const Edge& e) { return e.target; },
        [](const Edge& e) { return e.source; }, g.in_offsets_, g.in_arcs_);
    fill_rows(
        edges, n, [](const Edge& e) { return e.source; },
        [](const Edge& e) { return e.target; }, g.out_offsets_, g.out_arcs_);
    return g;
  }
};

DirectedMultigraph build_graph(std::span<const Edge> edges, std::size_t n) {
  return GraphBuilder::build(edges, n);
}

DirectedMultigraph build_graph(std::span<const Vertex> sources,
                               std::span<const Vertex> targets, std::size_t n) {
  if (sources.size() != targets.size()) {
    throw UsageError("build_graph: source and target arrays differ in length");
  }
  std::vector<Edge> edges(sources.size());
  for (std::size_t k = 0; k < sources.size(); ++k) edges[k] = Edge{sources[k], targets[k], 1};
  return GraphBuilder::build(edges, n);
}

Count DirectedMultigraph::multiplicity(Vertex source, Vertex target) const {
  auto row = out_arcs(source);
  auto it = std::lower_bound(row.begin(), row.end(), target,
                             [](const Arc& a, Vertex v) { return a.vertex < v; });
  return (it != row.end() && it->vertex == target) ? it->multiplicity : 0;
}

std::vector<Edge> DirectedMultigraph::edges() const {
  std::vector<Edge> out;
  out.reserve(out_arcs_.size());
  for (Vertex v = 0; v < num_vertices(); ++v) {
    for (const Arc& a : out_arcs(v)) out.push_back(Edge{v, a.vertex, a.multiplicity});
  }
  return out;
}

std::size_t DirectedMultigraph::num_dangling() const {
  return static_cast<std::size_t>(std::count(out_degree_.begin(), out_degree_.end(), Count{0}));
}

}  // namespace lwpr
