#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lwpr/laws.hpp"
#include "lwpr/limit_tree.hpp"
#include "lwpr/rng.hpp"

namespace lwpr {

// m(alpha) = sum_{k>=1} prod_{i<k} (i+theta)/(i+theta+alpha), for alpha > 1.
double malthusian_mean(double alpha, double theta, double tol = 1e-13);

// Root of m(alpha) = 1 by bisection on (1, 1 + 2 theta].
double malthusian(double theta, double tol = 1e-12);

// Marked Galton-Watson tree: root ~ p, other nodes ~ p*, truncated at depth N.
void sample_gw_limit(const BiDegreeLaw& law, const BiDegreeLaw& biased, std::uint32_t N, RngStream& rng,
                     LimitTree& out);
LimitTree sample_gw_limit(const BiDegreeLaw& law, std::uint32_t N, RngStream& rng);

// CTBP genealogy observed at an independent Exp(alpha) time. All marks 1.
// Throws ResourceError past node_cap.
void sample_ctbp_limit(double theta, double alpha, RngStream& rng, LimitTree& out,
                       std::size_t node_cap = 10'000'000);
LimitTree sample_ctbp_limit(double theta, double alpha, RngStream& rng, std::size_t node_cap = 10'000'000);

struct PolyaParams {
  Count m = 2;
  double delta = 0.0;
  // Root positions below this are redrawn.
  double position_floor = 1e-12;
  // Pins the root position instead of drawing it.
  std::optional<double> root_position;

  double chi() const { return (m + delta) / (2.0 * m + delta); }
  double psi() const { return (1.0 - chi()) / chi(); }
  double gamma_shape() const { return m + delta; }
  void validate() const;
};

// Directed Polya point tree to depth N. Depth-N nodes carry position,
// strength and drawn in-degree but no children.
void sample_polya_limit(const PolyaParams& p, std::uint32_t N, RngStream& rng, LimitTree& out);
LimitTree sample_polya_limit(const PolyaParams& p, std::uint32_t N, RngStream& rng);

// R^(N) at the root: R^(0) = 1-c, R^(j)_v = (1-c) + c sum_children R^(j-1)_u / m_u.
double root_pagerank(const LimitTree& t, double c, std::uint32_t N);
// Same with N = height of a fully sampled tree.
double root_pagerank(const LimitTree& t, double c);

// Fills t.C and t.B with independent draws.
void assign_weights(LimitTree& t, const ScalarLaw& C, const ScalarLaw& B, RngStream& rng);

// R^(0) = B_v, R^(j)_v = B_v + sum_children C_u R^(j-1)_u / m_u.
double root_pagerank_generalized(const LimitTree& t, std::uint32_t N);

struct FixedPointParams {
  BiDegreeLaw law;
  double c = 0.85;
  std::uint32_t K = 10;
  std::size_t M = 100'000;
  // Both set: generalized recursion with i.i.d. node weights.
  std::optional<ScalarLaw> C;
  std::optional<ScalarLaw> B;
  unsigned threads = 1;
};

// Population-dynamics solution of R = sum_{i<=N} (c / D*_i) R*_i + (1-c):
// a pool of (mark, R) pairs started at R = 1-c, K-1 resampling sweeps of the
// size-biased recursion, then one root sweep with the root law. The result has
// the law of R^(K) at the root of the matching Galton-Watson tree.
std::vector<double> solve_fixed_point_mc(const FixedPointParams& p, const RngStream& rng);

// M independent draws of fn, in fixed blocks with derived streams so the
// result does not depend on `threads`.
std::vector<double> sample_pool(std::size_t M, const RngStream& rng, unsigned threads,
                                const std::function<double(RngStream&, LimitTree&)>& fn);

}  // namespace lwpr
