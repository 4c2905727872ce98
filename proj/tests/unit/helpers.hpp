#pragma once

#include <cmath>
#include <vector>

#include "lwpr/graph.hpp"
#include "lwpr/rng.hpp"

namespace testing_helpers {

// Small random multigraph: each ordered pair (self-loops included) gets an
// edge with probability p, multiplicity 1 or 2.
inline lwpr::DirectedMultigraph random_graph(lwpr::RngStream& rng, std::size_t n, double p) {
  std::vector<lwpr::Edge> edges;
  for (lwpr::Vertex s = 0; s < n; ++s) {
    for (lwpr::Vertex t = 0; t < n; ++t) {
      if (rng.uniform() < p) edges.push_back({s, t, rng.uniform() < 0.2 ? 2u : 1u});
    }
  }
  return lwpr::build_graph(edges, n);
}

inline lwpr::DirectedMultigraph from_pairs(std::vector<std::pair<lwpr::Vertex, lwpr::Vertex>> pairs,
                                           std::size_t n) {
  std::vector<lwpr::Edge> edges;
  for (auto [s, t] : pairs) edges.push_back({s, t, 1});
  return lwpr::build_graph(edges, n);
}

// Sample mean and its standard error.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(x.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(x.size()))};
}

}  // namespace testing_helpers
