#include "lwpr/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "lwpr/error.hpp"
#include "lwpr/parallel.hpp"

namespace lwpr {

namespace {

constexpr std::size_t kBlock = 1 << 14;

// One synchronous pull sweep: next_i = finish(i, sum_j e_{j,i} * scaled_j).
// Returns the sup-norm change.
template <typename Finish>
double sweep(const DirectedMultigraph& g, const std::vector<double>& scaled,
             const std::vector<double>& current, std::vector<double>& next, unsigned threads,
             Finish finish) {
  const std::size_t n = g.num_vertices();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> block_delta(blocks, 0.0);
  parallel_blocks(n, kBlock, threads, [&](std::size_t begin, std::size_t end, std::size_t b) {
    double delta = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      double acc = 0.0;
      for (const Arc& a : g.in_arcs(static_cast<Vertex>(i))) {
        acc += static_cast<double>(a.multiplicity) * scaled[a.vertex];
      }
      next[i] = finish(i, acc);
      delta = std::max(delta, std::abs(next[i] - current[i]));
    }
    block_delta[b] = delta;
  });
  return blocks == 0 ? 0.0 : *std::max_element(block_delta.begin(), block_delta.end());
}

// Shared driver; `max_steps` < 0 means iterate to tolerance.
template <typename Scale, typename Finish>
PageRankVector iterate(const DirectedMultigraph& g, std::vector<double> start, double tol, int max_steps,
                       int max_iter, unsigned threads, Scale scale, Finish finish) {
  const std::size_t n = g.num_vertices();
  PageRankVector out;
  std::vector<double> current = std::move(start);
  std::vector<double> next(n), scaled(n);
  const bool fixed_count = max_steps >= 0;
  const int cap = fixed_count ? max_steps : max_iter;
  int it = 0;
  double residual = 0.0;
  bool converged = fixed_count;
  while (it < cap) {
    for (std::size_t j = 0; j < n; ++j) scaled[j] = scale(j, current[j]);
    residual = sweep(g, scaled, current, next, threads, finish);
    current.swap(next);
    ++it;
    if (!fixed_count && residual < tol) {
      converged = true;
      break;
    }
  }
  if (!converged && n > 0) {
    throw ConvergenceError("PageRank iteration did not reach tol=" + std::to_string(tol) + " within " +
                               std::to_string(max_iter) + " iterations (residual " +
                               std::to_string(residual) + ")",
                           residual, it);
  }
  out.values = std::move(current);
  out.iterations = it;
  out.residual = residual;
  if (fixed_count) out.order = max_steps;
  return out;
}

}  // namespace

void PageRankParams::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("damping factor c must lie in (0,1), got " + std::to_string(c));
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
}

double PageRankVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

double PageRankVector::mean() const { return values.empty() ? 0.0 : sum() / static_cast<double>(values.size()); }

GeneralizedWeights GeneralizedWeights::uniform(std::size_t n, double c) {
  return GeneralizedWeights{std::vector<double>(n, c), std::vector<double>(n, 1.0 - c)};
}

void GeneralizedWeights::validate(std::size_t n) const {
  if (C.size() != n || B.size() != n) throw ConfigError("generalized weights must have one entry per vertex");
  for (double x : C) {
    if (!(x >= 0.0 && x < 1.0)) throw ConfigError("generalized weight C must lie in [0,1)");
  }
  for (double x : B) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("generalized weight B must be nonnegative");
  }
}

double GeneralizedWeights::max_c() const { return C.empty() ? 0.0 : *std::max_element(C.begin(), C.end()); }

PageRankVector solve_pagerank(const DirectedMultigraph& g, const PageRankParams& p) {
  p.validate();
  const double c = p.c;
  const double teleport = 1.0 - c;
  auto out = iterate(
      g, std::vector<double>(g.num_vertices(), teleport), p.tol, -1, p.max_iter, p.threads,
      [&](std::size_t j, double r) { return g.out_degree(static_cast<Vertex>(j)) ? r / g.out_degree(static_cast<Vertex>(j)) : 0.0; },
      [&](std::size_t, double acc) { return c * acc + teleport; });
  out.params = p;
  return out;
}

PageRankVector pagerank_truncated(const DirectedMultigraph& g, const PageRankParams& p, int N) {
  p.validate();
  if (N < 0) throw UsageError("pagerank_truncated: N must be nonnegative");
  const double c = p.c;
  const double teleport = 1.0 - c;
  auto out = iterate(
      g, std::vector<double>(g.num_vertices(), teleport), 0.0, N, N, p.threads,
      [&](std::size_t j, double r) { return g.out_degree(static_cast<Vertex>(j)) ? r / g.out_degree(static_cast<Vertex>(j)) : 0.0; },
      [&](std::size_t, double acc) { return c * acc + teleport; });
  out.params = p;
  return out;
}

TruncationGap truncation_gap(const PageRankVector& exact, const PageRankVector& truncated, double slack) {
  if (exact.values.size() != truncated.values.size()) throw UsageError("truncation_gap: size mismatch");
  if (!truncated.order) throw UsageError("truncation_gap: second argument must be a truncated solve");
  const std::size_t n = exact.values.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += exact.values[i] - truncated.values[i];
  TruncationGap gap;
  gap.mean_gap = n ? total / static_cast<double>(n) : 0.0;
  gap.bound = std::pow(truncated.params.c, *truncated.order + 1);
  if (gap.mean_gap < -slack || gap.mean_gap > gap.bound + slack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "truncation gap " << gap.mean_gap << " outside [0, c^(N+1) = " << gap.bound << "]";
    throw InvariantViolation(msg.str());
  }
  return gap;
}

TruncationGap truncation_gap(const DirectedMultigraph& g, const PageRankParams& p, int N, double slack) {
  return truncation_gap(solve_pagerank(g, p), pagerank_truncated(g, p, N), slack);
}

PageRankVector solve_generalized(const DirectedMultigraph& g, const GeneralizedWeights& w, double tol,
                                 int max_iter, unsigned threads) {
  w.validate(g.num_vertices());
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  auto out = iterate(
      g, w.B, tol, -1, max_iter, threads,
      [&](std::size_t j, double r) {
        const auto d = g.out_degree(static_cast<Vertex>(j));
        return d ? w.C[j] * r / d : 0.0;
      },
      [&](std::size_t i, double acc) { return acc + w.B[i]; });
  out.params.c = w.max_c();
  out.params.tol = tol;
  out.params.max_iter = max_iter;
  return out;
}

PageRankVector generalized_truncated(const DirectedMultigraph& g, const GeneralizedWeights& w, int N,
                                     unsigned threads) {
  w.validate(g.num_vertices());
  if (N < 0) throw UsageError("generalized_truncated: N must be nonnegative");
  auto out = iterate(
      g, w.B, 0.0, N, N, threads,
      [&](std::size_t j, double r) {
        const auto d = g.out_degree(static_cast<Vertex>(j));
        return d ? w.C[j] * r / d : 0.0;
      },
      [&](std::size_t i, double acc) { return acc + w.B[i]; });
  out.params.c = w.max_c();
  return out;
}

double lower_bound_check(const DirectedMultigraph& g, const PageRankVector& exact, double slack) {
  const auto one_step = pagerank_truncated(g, exact.params, 1);
  std::vector<Vertex> bad;
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.num_vertices(); ++i) {
    margin = std::min(margin, exact.values[i] - one_step.values[i]);
    if (exact.values[i] < one_step.values[i] - slack) bad.push_back(static_cast<Vertex>(i));
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "PageRank below (1-c)(1 + c sum e/d_out) at " << bad.size() << " vertices:";
    for (std::size_t k = 0; k < std::min<std::size_t>(bad.size(), 20); ++k) msg << ' ' << bad[k];
    throw InvariantViolation(msg.str());
  }
  return margin;
}

double lower_bound_check(const DirectedMultigraph& g, const PageRankParams& p) {
  return lower_bound_check(g, solve_pagerank(g, p));
}

}  // namespace lwpr
