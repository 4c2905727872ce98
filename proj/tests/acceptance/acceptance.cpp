// One line per criterion: "criterion <k> PASS|FAIL <detail>".
// Exit status 0 iff every selected criterion passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lwpr/census.hpp"
#include "lwpr/error.hpp"
#include "lwpr/generators.hpp"
#include "lwpr/limits.hpp"
#include "lwpr/pagerank.hpp"
#include "lwpr/tails.hpp"
#include "oracles.hpp"

using namespace lwpr;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

struct Stats {
  double mean = 0.0;
  double se = 0.0;
};

Stats stats(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()))};
}

BiDegreeLaw uniform3() {
  const std::vector<double> pmf{0, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  return BiDegreeLaw::independent(pmf, pmf);
}

// Standard PageRank, or the generalized solver with C = c and B = 1 - c.
struct Pipe {
  bool generalized = false;
  unsigned threads = 1;

  PageRankVector exact(const DirectedMultigraph& g, double c) const {
    if (generalized) return solve_generalized(g, GeneralizedWeights::uniform(g.num_vertices(), c), 1e-13, 10'000, threads);
    return solve_pagerank(g, {c, 1e-13, 10'000, threads});
  }
  PageRankVector truncated(const DirectedMultigraph& g, double c, int N) const {
    if (generalized) return generalized_truncated(g, GeneralizedWeights::uniform(g.num_vertices(), c), N, threads);
    return pagerank_truncated(g, {c, 1e-13, 10'000, threads}, N);
  }
  double root(LimitTree& t, double c, std::uint32_t N, RngStream& r) const {
    if (!generalized) return root_pagerank(t, c, N);
    assign_weights(t, ScalarLaw::constant(c), ScalarLaw::constant(1.0 - c), r);
    return root_pagerank_generalized(t, N);
  }
};

DirectedMultigraph make_dcm(const BiDegreeLaw& law, std::size_t n, RngStream rng) {
  return gen_dcm(sample_bidegree_sequence(law, n, rng), rng);
}

DirectedMultigraph make_irg(std::size_t n, RngStream rng) {
  RngStream wr = rng.derive(1);
  std::vector<double> wo(n), wi(n);
  for (std::size_t i = 0; i < n; ++i) {
    wo[i] = ScalarLaw::pareto(1.0, 2.5).sample(wr);
    wi[i] = ScalarLaw::pareto(1.0, 2.5).sample(wr);
  }
  return gen_irg(wo, wi, std::nullopt, rng);
}

struct NamedGraph {
  std::string name;
  DirectedMultigraph g;
};

std::vector<NamedGraph> all_models(std::size_t n, std::uint64_t seed) {
  RngStream base(seed, streams::kGraph);
  std::vector<NamedGraph> out;
  out.push_back({"dcm", make_dcm(uniform3(), n, base.derive(1))});
  out.push_back({"irg", make_irg(n, base.derive(2))});
  RngStream r3 = base.derive(3);
  out.push_back({"dpa", gen_dpa(n, {2, 1.0}, r3)});
  RngStream r4 = base.derive(4);
  out.push_back({"ctbp", gen_ctbp_tree({1.0}, n, r4).graph});
  return out;
}

std::vector<double> gw_pool(const BiDegreeLaw& law, double c, std::uint32_t N, std::size_t M, const RngStream& rng,
                            const Pipe& pipe) {
  const BiDegreeLaw biased = law.size_biased();
  return sample_pool(M, rng, pipe.threads, [&](RngStream& r, LimitTree& t) {
    sample_gw_limit(law, biased, N, r, t);
    return pipe.root(t, c, N, r);
  });
}

// Criterion 1: 0 <= mean gap <= c^{N+1} for every model, size, c and N.
Result truncation_bound(const Pipe& pipe) {
  Result res;
  std::size_t checks = 0;
  double worst_ratio = 0.0, most_negative = 0.0;
  for (std::size_t n : {1000u, 10'000u}) {
    for (auto& [name, g] : all_models(n, 1)) {
      for (double c : {0.5, 0.85}) {
        const auto exact = pipe.exact(g, c);
        for (int N = 0; N <= 20; ++N) {
          try {
            const auto gap = truncation_gap(exact, pipe.truncated(g, c, N), 1e-10);
            worst_ratio = std::max(worst_ratio, gap.mean_gap / gap.bound);
            most_negative = std::min(most_negative, gap.mean_gap);
          } catch (const InvariantViolation& e) {
            res.pass = false;
            res.detail += name + " n=" + std::to_string(n) + " c=" + fmt(c) + " N=" + std::to_string(N) + ": " +
                          e.what() + "; ";
          }
          ++checks;
        }
      }
    }
  }
  res.detail += std::to_string(checks) + " (model,n,c,N) cases; max gap/bound " + fmt(worst_ratio) +
                ", min gap " + fmt(most_negative);
  return res;
}

// Criterion 2: truncated solve vs path enumeration, exact solve vs dense solve.
Result oracle_equivalence(const Pipe& pipe) {
  Result res;
  RngStream rng(2, streams::kGraph);
  double worst_paths = 0.0, worst_dense = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const double p = 0.1 + 0.4 * rng.uniform();
    std::vector<Edge> edges;
    for (Vertex s = 0; s < n; ++s) {
      for (Vertex t = 0; t < n; ++t) {
        if (rng.uniform() < p) edges.push_back({s, t, rng.uniform() < 0.2 ? 2u : 1u});
      }
    }
    const auto g = build_graph(edges, n);
    const double c = 0.05 + 0.9 * rng.uniform();
    const int N = static_cast<int>(rng.below(6));
    const auto trunc = pipe.truncated(g, c, N);
    const auto paths = oracle::path_enumeration(g, c, N);
    const auto exact = pipe.exact(g, c);
    const auto dense = oracle::dense_pagerank(g, c);
    for (std::size_t i = 0; i < n; ++i) {
      worst_paths = std::max(worst_paths, std::abs(trunc.values[i] - paths[i]));
      worst_dense = std::max(worst_dense, std::abs(exact.values[i] - dense[i]));
    }
  }
  res.pass = worst_paths <= 1e-12 && worst_dense <= 1e-10;
  res.detail = "200 graphs; max |truncated - paths| " + fmt(worst_paths) + ", max |solve - dense| " +
               fmt(worst_dense);
  return res;
}

// Criterion 3: mass identities on graphs, E[R] <= 1 + 3 se on every limit law.
Result mass_identities(const Pipe& pipe) {
  Result res;
  double worst_free = 0.0, worst_excess = -1e300;
  const BiDegreeLaw dangling_law({{0, 2, 0.25}, {2, 1, 0.5}, {1, 1, 0.25}});
  RngStream base(3, streams::kGraph);
  for (double c : {0.5, 0.85}) {
    for (std::size_t n : {1000u, 10'000u}) {
      const auto free_g = make_dcm(uniform3(), n, base.derive(n));
      if (free_g.num_dangling() != 0) throw InvariantViolation("dangling vertex in a dangling-free law");
      worst_free = std::max(worst_free, std::abs(pipe.exact(free_g, c).sum() - n) / n);
      auto graphs = all_models(n, 3);
      graphs.push_back({"dcm-dangling", make_dcm(dangling_law, n, base.derive(n + 1))});
      for (auto& [name, g] : graphs) {
        if (g.num_dangling() == 0) continue;
        const double excess = pipe.exact(g, c).sum() - static_cast<double>(n);
        worst_excess = std::max(worst_excess, excess);
        if (excess > 0.0) {
          res.pass = false;
          res.detail += name + " sum exceeds n by " + fmt(excess) + "; ";
        }
      }
    }
  }
  if (worst_free > 1e-8) res.pass = false;
  res.detail += "dangling-free max |sum-n|/n " + fmt(worst_free) + ", dangling max sum-n " + fmt(worst_excess);

  const double c = 0.85;
  const std::size_t M = 20'000;
  std::map<std::string, std::vector<double>> pools;
  pools["gw"] = gw_pool(uniform3(), c, 10, M, RngStream(3, streams::kLimits), pipe);
  pools["gw-dangling"] = gw_pool(dangling_law, c, 10, M, RngStream(3, streams::kLimits).derive(1), pipe);
  const double alpha = malthusian(1.0);
  pools["ctbp"] = sample_pool(M, RngStream(3, streams::kLimits).derive(2), pipe.threads,
                              [&](RngStream& r, LimitTree& t) {
                                sample_ctbp_limit(1.0, alpha, r, t);
                                return pipe.root(t, c, t.height(), r);
                              });
  pools["polya"] = sample_pool(M, RngStream(3, streams::kLimits).derive(3), pipe.threads,
                               [&](RngStream& r, LimitTree& t) {
                                 sample_polya_limit({2, 1.0}, 6, r, t);
                                 return pipe.root(t, c, 6, r);
                               });
  for (auto& [name, pool] : pools) {
    const auto s = stats(pool);
    const bool ok = s.mean <= 1.0 + 3.0 * s.se;
    res.pass = res.pass && ok;
    res.detail += "; E[R] " + name + " " + fmt(s.mean) + " (se " + fmt(s.se, 2) + ")";
  }
  return res;
}

// Criterion 4: GW mean identity.
Result gw_mean(const Pipe& pipe) {
  const double c = 0.5;
  const std::uint32_t N = 10;
  const auto pool = gw_pool(uniform3(), c, N, 100'000, RngStream(4, streams::kLimits), pipe);
  const auto s = stats(pool);
  const double target = 1.0 - std::pow(c, N + 1);
  const double z = (s.mean - target) / s.se;
  return {std::abs(z) <= 3.0, "mean " + fmt(s.mean, 7) + " vs " + fmt(target, 7) + ", z = " + fmt(z, 3)};
}

// Criterion 5: KS between DCM tails and the GW limit pool.
Result dcm_convergence(const Pipe& pipe) {
  const double c = 0.5;
  const std::uint32_t N = 10;
  const std::size_t M = 100'000;
  const auto law = uniform3();
  Result res;
  int monotone = 0;
  const int seeds = 10;
  double worst_final = 0.0;
  std::string rows;
  for (int seed = 1; seed <= seeds; ++seed) {
    const auto limit = TailSample::from(gw_pool(law, c, N, M, RngStream(seed, streams::kLimits), pipe));
    std::vector<double> ks;
    for (std::size_t n : {1000u, 10'000u, 100'000u}) {
      const auto g = make_dcm(law, n, RngStream(seed, streams::kGraph).derive(n));
      ks.push_back(ks_distance(TailSample::from(pipe.exact(g, c).values), limit));
    }
    monotone += ks[0] > ks[1] && ks[1] > ks[2];
    worst_final = std::max(worst_final, ks[2]);
    rows += " " + fmt(ks[0], 3) + "/" + fmt(ks[1], 3) + "/" + fmt(ks[2], 3);
  }
  res.pass = worst_final < 0.02 && monotone * 10 >= 9 * seeds;
  res.detail = "max KS at n=1e5 " + fmt(worst_final) + ", monotone in " + std::to_string(monotone) + "/" +
               std::to_string(seeds) + " seeds; KS by n:" + rows;
  return res;
}

// Criterion 6: depth-2 census of DCM vs the GW limit.
Result census_convergence(const Pipe&) {
  const BiDegreeLaw law({{1, 2, 0.5}, {2, 1, 0.5}});
  const BiDegreeLaw biased = law.size_biased();
  const int seeds = 10;
  int monotone = 0;
  double worst_final = 0.0;
  std::string rows;
  for (int seed = 1; seed <= seeds; ++seed) {
    const auto limit = census_limit([&](RngStream& r, LimitTree& t) { sample_gw_limit(law, biased, 2, r, t); }, 2,
                                    100'000, RngStream(seed, streams::kLimits));
    std::vector<double> tv;
    for (std::size_t n : {1000u, 10'000u, 100'000u}) {
      const auto g = make_dcm(law, n, RngStream(seed, streams::kGraph).derive(n));
      tv.push_back(tv_distance(census(g, 2, CensusMode::full(), RngStream(seed, streams::kCensus)), limit));
    }
    monotone += tv[0] > tv[1] && tv[1] > tv[2];
    worst_final = std::max(worst_final, tv[2]);
    rows += " " + fmt(tv[0], 3) + "/" + fmt(tv[1], 3) + "/" + fmt(tv[2], 3);
  }
  return {worst_final < 0.05 && monotone * 10 >= 9 * seeds,
          "max TV at n=1e5 " + fmt(worst_final) + ", decreasing in " + std::to_string(monotone) + "/" +
              std::to_string(seeds) + " seeds; TV by n:" + rows};
}

// Criterion 7: CTBP tree vs the Exp(alpha*) limit.
Result ctbp_limit(const Pipe& pipe) {
  const double theta = 1.0, c = 0.5;
  const double alpha = malthusian(theta);
  RngStream gr(7, streams::kGraph);
  const auto tree = gen_ctbp_tree({theta}, 100'000, gr);
  const auto graph_side = TailSample::from(pipe.exact(tree.graph, c).values);
  const std::size_t M = 100'000;
  const auto pool = sample_pool(M, RngStream(7, streams::kLimits), pipe.threads, [&](RngStream& r, LimitTree& t) {
    sample_ctbp_limit(theta, alpha, r, t);
    return pipe.root(t, c, t.height(), r);
  });
  // root-only trees are exactly those with R = 1 - c
  double freq = 0.0;
  for (double r : pool) freq += r == 1.0 - c;
  freq /= static_cast<double>(M);
  const double p = alpha / (alpha + theta);
  const double z = (freq - p) / std::sqrt(p * (1 - p) / M);
  const double ks = ks_distance(graph_side, TailSample::from(pool));
  return {ks < 0.03 && std::abs(z) <= 3.0, "alpha* " + fmt(alpha, 16) + ", KS " + fmt(ks) + ", root-only " +
                                               fmt(freq) + " vs " + fmt(p) + " (z = " + fmt(z, 3) + ")"};
}

// Criterion 8: Hill indices of DPA in-degree and PageRank.
Result pam_exponent(const Pipe& pipe) {
  Result res;
  const std::size_t n = 100'000, top = n / 100;
  for (auto [m, delta] : {std::pair<Count, double>{1, 0.0}, {2, 1.0}}) {
    const double target = 2.0 + delta / m;
    std::vector<double> hills_in, hills_pr, hills_total;
    for (int seed = 1; seed <= 5; ++seed) {
      RngStream rng(seed, streams::kGraph);
      const auto g = gen_dpa(n, {m, delta}, rng);
      std::vector<double> in(n), total(n);
      for (Vertex v = 0; v < n; ++v) {
        in[v] = g.in_degree(v);
        total[v] = g.in_degree(v) + g.out_degree(v);
      }
      hills_in.push_back(hill_estimator(TailSample::from(in), top));
      hills_total.push_back(hill_estimator(TailSample::from(total), top));
      hills_pr.push_back(hill_estimator(TailSample::from(pipe.exact(g, 0.5).values), top));
    }
    const double h_in = stats(hills_in).mean, h_pr = stats(hills_pr).mean, h_tot = stats(hills_total).mean;
    const bool ok = std::abs(h_in - target) <= 0.3 && h_pr >= h_in - 0.3;
    res.pass = res.pass && ok;
    res.detail += "(m=" + std::to_string(m) + ",delta=" + fmt(delta) + ") target " + fmt(target) + ": in-degree " +
                  fmt(h_in) + ", PageRank " + fmt(h_pr) + ", total degree " + fmt(h_tot) + "; ";
  }
  res.detail += "Hill on top 1%, mean of 5 seeds";
  return res;
}

// Criterion 9: Polya depth-1 census vs DPA.
Result polya_census(const Pipe&) {
  const PolyaParams p{2, 1.0};
  const auto limit = census_limit([&](RngStream& r, LimitTree& t) { sample_polya_limit(p, 1, r, t); }, 1, 100'000,
                                  RngStream(9, streams::kLimits));
  RngStream rng(9, streams::kGraph);
  const auto g = gen_dpa(100'000, {p.m, p.delta}, rng);
  const auto emp = census(g, 1, CensusMode::full(), RngStream(9, streams::kCensus));
  const double tv = tv_distance(limit, emp);
  return {tv < 0.08, "TV " + fmt(tv) + " over " + std::to_string(emp.classes.size()) + " graph classes"};
}

// Criterion 10: fixed-point pool vs the GW sampler.
Result fixed_point(const Pipe& pipe) {
  const double c = 0.5;
  const std::uint32_t K = 10;
  const std::size_t M = 100'000;
  FixedPointParams fp{uniform3(), c, K, M};
  fp.threads = pipe.threads;
  const auto a = TailSample::from(solve_fixed_point_mc(fp, RngStream(10, streams::kLimits)));
  const auto b = TailSample::from(gw_pool(uniform3(), c, K, M, RngStream(10, streams::kLimits).derive(1), pipe));
  const double ks = ks_distance(a, b);
  return {ks < 0.01, "KS " + fmt(ks)};
}

Result generalized(const Pipe& pipe) {
  Result res;
  Pipe g = pipe;
  g.generalized = true;
  const std::vector<std::pair<std::string, std::function<Result(const Pipe&)>>> parts{
      {"1", truncation_bound}, {"2", oracle_equivalence}, {"3", mass_identities},
      {"4", gw_mean},          {"5", dcm_convergence}};
  for (const auto& [k, fn] : parts) {
    const auto r = fn(g);
    res.pass = res.pass && r.pass;
    res.detail += "[reduced " + k + (r.pass ? " ok" : " FAIL") + ": " + r.detail + "] ";
  }

  const std::size_t n = 100'000, M = 100'000;
  const std::uint32_t N = 10;
  const auto C = ScalarLaw::uniform(0.0, 0.85);
  const auto B = ScalarLaw::exponential(0.15);
  const auto law = uniform3();
  const auto graph = make_dcm(law, n, RngStream(11, streams::kGraph));
  RngStream wr(11, streams::kWeights);
  GeneralizedWeights w;
  w.C.resize(n);
  w.B.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.C[i] = C.sample(wr);
    w.B[i] = B.sample(wr);
  }
  const auto graph_side = TailSample::from(solve_generalized(graph, w, 1e-13, 10'000, pipe.threads).values);
  const BiDegreeLaw biased = law.size_biased();
  const auto pool = sample_pool(M, RngStream(11, streams::kLimits), pipe.threads, [&](RngStream& r, LimitTree& t) {
    sample_gw_limit(law, biased, N, r, t);
    assign_weights(t, C, B, r);
    return root_pagerank_generalized(t, N);
  });
  const double ks = ks_distance(graph_side, TailSample::from(pool));
  res.pass = res.pass && ks < 0.03;
  res.detail += "random (C,B) KS " + fmt(ks);
  return res;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  unsigned threads = 1;
  app.add_option("--criterion", only, "criteria to run (default all)")->check(CLI::Range(1, 11));
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Result(const Pipe&)>> criteria{
      truncation_bound, oracle_equivalence, mass_identities, gw_mean,     dcm_convergence, census_convergence,
      ctbp_limit,       pam_exponent,       polya_census,    fixed_point, generalized};
  if (only.empty()) {
    for (int k = 1; k <= 11; ++k) only.push_back(k);
  }
  Pipe pipe;
  pipe.threads = threads;
  bool all = true;
  for (int k : only) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[k - 1](pipe);
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s %s (%.1f s)\n", k, r.pass ? "PASS" : "FAIL", r.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
