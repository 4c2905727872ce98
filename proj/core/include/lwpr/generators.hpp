#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lwpr/graph.hpp"
#include "lwpr/laws.hpp"
#include "lwpr/rng.hpp"

namespace lwpr {

struct BiDegreeSequence {
  std::vector<Count> d_out;
  std::vector<Count> d_in;
  std::uint64_t L = 0;
  // Number of unit increments applied by the repair step.
  std::uint64_t repaired = 0;
};

// n i.i.d. draws from the law; the smaller side is then topped up by one at
// uniformly chosen distinct vertices (in rounds of at most n) until the sums agree.
BiDegreeSequence sample_bidegree_sequence(const BiDegreeLaw& law, std::size_t n, RngStream& rng);

// Uniform matching of out-stubs to in-stubs. Self-loops and multi-edges kept.
DirectedMultigraph gen_dcm(const BiDegreeSequence& seq, RngStream& rng);

// Independent edges i -> j (i != j) with probability min(1, w_out_i w_in_j / (theta n)).
// theta defaults to the mean of w_in.
DirectedMultigraph gen_irg(std::span<const double> w_out, std::span<const double> w_in,
                           std::optional<double> theta, RngStream& rng);

struct PamParams {
  Count m = 1;
  double delta = 0.0;

  void validate() const;
};

// Sequential directed preferential attachment, edges young -> old. Vertices
// 0 and 1 start with m edges 1 -> 0; vertex t then sends m edges one at a
// time, choosing i < t with probability (D_i + delta) / (2m(t-1) + t delta + l - 1),
// D_i the total degree including earlier edges of the same batch.
DirectedMultigraph gen_dpa(std::size_t n, const PamParams& p, RngStream& rng);

struct CtbpParams {
  // Birth rate k + theta after k children.
  double theta = 1.0;

  void validate() const;
  static CtbpParams from_pam(const PamParams& p) { return {1.0 + p.delta / p.m}; }
};

struct CtbpTree {
  DirectedMultigraph graph;
  std::vector<double> birth_times;
};

// Exact event-driven simulation until target_n individuals exist. Edges point
// child -> parent, ids in birth order, root 0 born at time 0.
CtbpTree gen_ctbp_tree(const CtbpParams& p, std::size_t target_n, RngStream& rng);

}  // namespace lwpr
