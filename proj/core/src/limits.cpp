#include "lwpr/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lwpr/error.hpp"
#include "lwpr/parallel.hpp"

namespace lwpr {

namespace {

constexpr std::size_t kPoolBlock = 1024;

}  // namespace

double malthusian_mean(double alpha, double theta, double tol) {
  if (!(alpha > 1.0)) return std::numeric_limits<double>::infinity();
  // Partial sum plus the exact tail; the tail telescopes since
  // t_{k+1} = t_k (k+theta)/(k+theta+alpha).
  double term = 1.0, sum = 0.0;
  std::uint64_t j = 0;
  while (j < 4096) {
    term *= (j + theta) / (j + theta + alpha);
    ++j;
    sum += term;
    if (term < tol * sum) break;
  }
  // sum_{i>j} t_i = t_{j+1} (j + theta + alpha) / (alpha - 1) = t_j (j + theta) / (alpha - 1)
  return sum + term * (j + theta) / (alpha - 1.0);
}

double malthusian(double theta, double tol) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("malthusian: theta must be positive");
  double lo = 1.0, hi = 1.0 + 2.0 * theta;
  if (!(malthusian_mean(hi, theta) < 1.0)) throw ConfigError("malthusian: bracket does not contain the root");
  for (int it = 0; it < 2000 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (malthusian_mean(mid, theta) > 1.0 ? lo : hi) = mid;
  }
  const double alpha = 0.5 * (lo + hi);
  const double residual = std::abs(malthusian_mean(alpha, theta) - 1.0);
  if (!(residual < 10.0 * tol)) {
    throw InvariantViolation("malthusian: |m(alpha) - 1| = " + std::to_string(residual) + " at alpha = " +
                             std::to_string(alpha));
  }
  return alpha;
}

void sample_gw_limit(const BiDegreeLaw& law, const BiDegreeLaw& biased, std::uint32_t N, RngStream& rng,
                     LimitTree& out) {
  out.clear();
  out.depth_limit = N;
  auto [h, l] = law.sample(rng);
  out.add_node(LimitTree::kNone, h, l);
  for (std::uint32_t v = 0; v < out.size(); ++v) {
    if (out.depth[v] >= N) break;
    const Count kids = out.in_degree[v];
    for (Count i = 0; i < kids; ++i) {
      auto [ch, cl] = biased.sample(rng);
      out.add_node(v, ch, cl);
    }
  }
}

LimitTree sample_gw_limit(const BiDegreeLaw& law, std::uint32_t N, RngStream& rng) {
  LimitTree t;
  sample_gw_limit(law, law.size_biased(), N, rng, t);
  return t;
}

void sample_ctbp_limit(double theta, double alpha, RngStream& rng, LimitTree& out, std::size_t node_cap) {
  if (!(theta > 0.0)) throw ConfigError("CTBP limit: theta must be positive");
  if (!(alpha > 0.0)) throw ConfigError("CTBP limit: alpha must be positive");
  out.clear();
  const double horizon = rng.exponential(alpha);
  out.horizon = horizon;
  out.add_node(LimitTree::kNone, 1, 0);
  out.birth_time.push_back(0.0);
  for (std::uint32_t v = 0; v < out.size(); ++v) {
    double t = out.birth_time[v];
    Count k = 0;
    while (true) {
      t += rng.exponential(k + theta);
      if (!(t < horizon)) break;
      if (out.size() >= node_cap) {
        throw ResourceError("CTBP limit tree exceeded " + std::to_string(node_cap) + " nodes");
      }
      out.add_node(v, 1, 0);
      out.birth_time.push_back(t);
      ++k;
    }
    out.in_degree[v] = k;
  }
}

LimitTree sample_ctbp_limit(double theta, double alpha, RngStream& rng, std::size_t node_cap) {
  LimitTree t;
  sample_ctbp_limit(theta, alpha, rng, t, node_cap);
  return t;
}

void PolyaParams::validate() const {
  if (m < 2) throw ConfigError("Polya point tree needs m >= 2, got m = " + std::to_string(m));
  if (!(delta > -static_cast<double>(m))) throw ConfigError("Polya point tree needs delta > -m");
  if (!(position_floor > 0.0 && position_floor < 1.0)) throw ConfigError("Polya position floor must lie in (0,1)");
  if (root_position && !(*root_position > 0.0 && *root_position <= 1.0)) {
    throw ConfigError("Polya root position must lie in (0,1]");
  }
}

void sample_polya_limit(const PolyaParams& p, std::uint32_t N, RngStream& rng, LimitTree& out) {
  p.validate();
  out.clear();
  out.depth_limit = N;
  const double chi = p.chi(), psi = p.psi(), shape = p.gamma_shape();
  double x = p.root_position ? *p.root_position : std::pow(rng.uniform_positive(), chi);
  while (!p.root_position && x < p.position_floor) {
    ++out.root_resamples;
    x = std::pow(rng.uniform_positive(), chi);
  }
  out.add_node(LimitTree::kNone, p.m, 0);
  out.position.push_back(x);
  std::vector<double> kids;
  for (std::uint32_t v = 0; v < out.size(); ++v) {
    const double xv = out.position[v];
    const double g = rng.gamma(shape);
    out.strength.push_back(g);
    const double xpsi = std::pow(xv, psi);
    const auto count = rng.poisson(g * (1.0 / xpsi - 1.0));
    out.in_degree[v] = static_cast<Count>(count);
    if (out.depth[v] >= N) continue;
    kids.clear();
    for (std::uint64_t i = 0; i < count; ++i) {
      kids.push_back(std::pow(xpsi + rng.uniform_positive() * (1.0 - xpsi), 1.0 / psi));
    }
    std::sort(kids.begin(), kids.end());
    for (double y : kids) {
      out.add_node(v, p.m, 0);
      out.position.push_back(y);
    }
  }
}

LimitTree sample_polya_limit(const PolyaParams& p, std::uint32_t N, RngStream& rng) {
  LimitTree t;
  sample_polya_limit(p, N, rng, t);
  return t;
}

namespace {

void check_order(const LimitTree& t, std::uint32_t N) {
  if (t.size() == 0) throw UsageError("root_pagerank: empty tree");
  if (!t.complete() && N > t.depth_limit) {
    throw UsageError("root_pagerank: N = " + std::to_string(N) + " exceeds the sampled depth " +
                     std::to_string(t.depth_limit));
  }
}

}  // namespace

double root_pagerank(const LimitTree& t, double c, std::uint32_t N) {
  check_order(t, N);
  const double teleport = 1.0 - c;
  thread_local std::vector<double> val;
  const std::size_t end = static_cast<std::size_t>(
      std::upper_bound(t.depth.begin(), t.depth.end(), N) - t.depth.begin());
  val.assign(end, 0.0);
  for (std::size_t v = end; v-- > 0;) {
    if (t.depth[v] == N) {
      val[v] = teleport;
      continue;
    }
    double acc = 0.0;
    const std::size_t first = t.first_child[v];
    for (std::size_t u = first; u < first + t.child_count[v]; ++u) acc += val[u] / t.mark[u];
    val[v] = c * acc + teleport;
  }
  return val[0];
}

double root_pagerank(const LimitTree& t, double c) {
  if (!t.complete()) throw UsageError("root_pagerank: tree is truncated; pass N explicitly");
  return root_pagerank(t, c, t.height());
}

void assign_weights(LimitTree& t, const ScalarLaw& C, const ScalarLaw& B, RngStream& rng) {
  C.validate();
  B.validate();
  if (!(C.sup() < 1.0)) throw ConfigError("generalized weights need sup C < 1, got " + C.describe());
  t.C.resize(t.size());
  t.B.resize(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) {
    t.C[v] = C.sample(rng);
    t.B[v] = B.sample(rng);
  }
}

double root_pagerank_generalized(const LimitTree& t, std::uint32_t N) {
  check_order(t, N);
  if (t.C.size() != t.size() || t.B.size() != t.size()) {
    throw UsageError("root_pagerank_generalized: tree carries no (C, B) weights");
  }
  const double cmax = *std::max_element(t.C.begin(), t.C.end());
  if (!(cmax < 1.0)) throw ConfigError("root_pagerank_generalized: a node has C >= 1");
  thread_local std::vector<double> val;
  const std::size_t end = static_cast<std::size_t>(
      std::upper_bound(t.depth.begin(), t.depth.end(), N) - t.depth.begin());
  val.assign(end, 0.0);
  for (std::size_t v = end; v-- > 0;) {
    if (t.depth[v] == N) {
      val[v] = t.B[v];
      continue;
    }
    double acc = 0.0;
    const std::size_t first = t.first_child[v];
    for (std::size_t u = first; u < first + t.child_count[v]; ++u) acc += t.C[u] * val[u] / t.mark[u];
    val[v] = acc + t.B[v];
  }
  return val[0];
}

std::vector<double> sample_pool(std::size_t M, const RngStream& rng, unsigned threads,
                                const std::function<double(RngStream&, LimitTree&)>& fn) {
  std::vector<double> pool(M);
  parallel_blocks(M, kPoolBlock, threads, [&](std::size_t begin, std::size_t end, std::size_t block) {
    RngStream local = rng.derive(block);
    LimitTree scratch;
    for (std::size_t i = begin; i < end; ++i) pool[i] = fn(local, scratch);
  });
  return pool;
}

std::vector<double> solve_fixed_point_mc(const FixedPointParams& p, const RngStream& rng) {
  if (!(p.c > 0.0 && p.c < 1.0)) throw ConfigError("fixed point: c must lie in (0,1)");
  if (p.M < 1) throw ConfigError("fixed point: pool size must be at least 1");
  const bool generalized = p.C.has_value();
  if (generalized != p.B.has_value()) throw ConfigError("fixed point: C and B laws must be given together");
  if (generalized) {
    p.C->validate();
    p.B->validate();
    if (!(p.C->sup() < 1.0)) throw ConfigError("fixed point: sup C must be below 1");
  }
  const BiDegreeLaw biased = p.law.size_biased();
  const double teleport = 1.0 - p.c;

  // Entry u contributes weight * R to its parent: weight = C_u / m_u, or 1 / m_u
  // with the parent applying c.
  struct Entry {
    double weight;
    double R;
  };
  std::vector<Entry> pool(p.M), next(p.M);
  const std::size_t M = p.M;

  auto draw_node = [&](RngStream& r, const BiDegreeLaw& law, const std::vector<Entry>& prev, bool leaf) {
    auto [h, l] = law.sample(r);
    const double cw = generalized ? p.C->sample(r) : 0.0;
    const double b = generalized ? p.B->sample(r) : teleport;
    double R = b;
    if (!leaf) {
      double acc = 0.0;
      for (Count i = 0; i < l; ++i) {
        const Entry& e = prev[r.below(M)];
        acc += e.weight * e.R;
      }
      R = generalized ? acc + b : p.c * acc + teleport;
    }
    const double weight = h == 0 ? 0.0 : (generalized ? cw / h : 1.0 / h);
    return Entry{weight, R};
  };

  auto sweep = [&](std::uint64_t stage, const BiDegreeLaw& law, bool leaf) {
    const RngStream stage_rng = rng.derive(stage);
    parallel_blocks(M, kPoolBlock, p.threads, [&](std::size_t begin, std::size_t end, std::size_t block) {
      RngStream local = stage_rng.derive(block);
      for (std::size_t i = begin; i < end; ++i) next[i] = draw_node(local, law, pool, leaf);
    });
    pool.swap(next);
  };

  if (p.K == 0) {
    sweep(0, p.law, true);
  } else {
    sweep(0, biased, true);
    for (std::uint32_t j = 1; j < p.K; ++j) sweep(j, biased, false);
    sweep(p.K, p.law, false);
  }
  std::vector<double> out(M);
  for (std::size_t i = 0; i < M; ++i) out[i] = pool[i].R;
  return out;
}

}  // namespace lwpr
