#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lwpr/graph.hpp"

namespace lwpr {

struct PageRankParams {
  // Damping factor, in (0, 1).
  double c = 0.85;
  // Sup-norm tolerance on the iterate change.
  double tol = 1e-12;
  int max_iter = 10'000;
  // Worker threads for the per-vertex update; results do not depend on it.
  unsigned threads = 1;

  void validate() const;
};

// Graph-normalized scores with solver metadata.
struct PageRankVector {
  std::vector<double> values;
  // Iteration count N for a truncated solve; nullopt for the exact solve.
  std::optional<int> order;
  PageRankParams params;
  int iterations = 0;
  // Sup-norm of the last iterate change.
  double residual = 0.0;

  double sum() const;
  double mean() const;
};

// Per-vertex coefficients of the generalized equation
// R_i = sum_j C_j e_{j,i} / d_out(j) R_j + B_i.
struct GeneralizedWeights {
  std::vector<double> C;
  std::vector<double> B;

  // Constant weights C = c, B = 1 - c, which reduce to standard PageRank.
  static GeneralizedWeights uniform(std::size_t n, double c);
  void validate(std::size_t n) const;
  double max_c() const;
};

// Unique fixed point of R_i = c sum_j e_{j,i}/d_out(j) R_j + (1-c), by
// synchronous pull iteration from R = 1-c. Dangling vertices forward nothing.
// Throws ConvergenceError when max_iter is exhausted.
PageRankVector solve_pagerank(const DirectedMultigraph& g, const PageRankParams& p);

// Exactly N synchronous iterations from R = 1-c; equals the path sum over
// reversed paths of length <= N.
PageRankVector pagerank_truncated(const DirectedMultigraph& g, const PageRankParams& p, int N);

struct TruncationGap {
  double mean_gap = 0.0;
  double bound = 0.0;
};

// Mean of R - R^(N) against c^(N+1). Throws InvariantViolation when the gap
// leaves [-slack, bound + slack].
TruncationGap truncation_gap(const PageRankVector& exact, const PageRankVector& truncated,
                             double slack = 1e-10);
TruncationGap truncation_gap(const DirectedMultigraph& g, const PageRankParams& p, int N,
                             double slack = 1e-10);

PageRankVector solve_generalized(const DirectedMultigraph& g, const GeneralizedWeights& w,
                                 double tol = 1e-12, int max_iter = 10'000, unsigned threads = 1);

// N synchronous iterations of the generalized equation from R = B.
PageRankVector generalized_truncated(const DirectedMultigraph& g, const GeneralizedWeights& w, int N,
                                     unsigned threads = 1);

// Checks R_i >= (1-c)(1 + c sum_j e_{j,i}/d_out(j)) for every vertex and
// returns min_i (R_i - bound_i). Throws InvariantViolation listing
// offending vertices otherwise.
double lower_bound_check(const DirectedMultigraph& g, const PageRankVector& exact, double slack = 1e-12);
double lower_bound_check(const DirectedMultigraph& g, const PageRankParams& p);

}  // namespace lwpr
