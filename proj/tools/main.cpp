// lwpr: generate graphs, solve PageRank, sample limits and compare them.
// Exit codes: 0 ok, 1 operational error, 2 invariant violation.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "experiment.hpp"
#include "lwpr/census.hpp"
#include "lwpr/edge_list.hpp"
#include "lwpr/error.hpp"
#include "lwpr/limits.hpp"
#include "lwpr/pagerank.hpp"
#include "lwpr/tails.hpp"

using namespace lwpr;
using namespace lwpr::tools;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kViolation = 2;

std::string show(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::filesystem::path sidecar(const std::filesystem::path& p) {
  auto out = p;
  out.replace_extension(".json");
  return out;
}

struct ModelFlags {
  std::string model = "dcm";
  std::string law = "1:1:1";
  Count m = 1;
  double delta = 0.0;
  double theta = 1.0;
  std::string w_out = "pareto:1:2.5";
  std::string w_in = "pareto:1:2.5";
  std::optional<double> irg_theta;

  void add(CLI::App* app, bool limit) {
    app->add_option("--law", law, "bi-degree law h:l:p,... (dcm / gw)")->capture_default_str();
    app->add_option("--m", m, "edges per new vertex (dpa / polya)")->capture_default_str();
    app->add_option("--delta", delta, "attachment offset (dpa / polya)")->capture_default_str();
    app->add_option("--theta", theta, "CTBP birth-rate offset")->capture_default_str();
    if (!limit) {
      app->add_option("--w-out", w_out, "IRG out-weight law")->capture_default_str();
      app->add_option("--w-in", w_in, "IRG in-weight law")->capture_default_str();
      app->add_option("--irg-theta", irg_theta, "IRG normalizer (default mean of w_in)");
    }
  }

  // Limit names map onto the model whose limit they are.
  ModelConfig build(bool limit) const {
    json j{{"name", model}};
    std::string name = model;
    if (limit) {
      if (model == "gw") name = "dcm";
      else if (model == "polya") name = "dpa";
      else if (model != "ctbp") throw ConfigError("--model: expected gw, ctbp or polya, got '" + model + "'");
    }
    j["name"] = name;
    if (name == "dcm") j["law"] = law;
    if (name == "dpa") {
      j["m"] = m;
      j["delta"] = delta;
    }
    if (name == "ctbp") j["theta"] = theta;
    if (name == "irg") {
      j["w_out"] = w_out;
      j["w_in"] = w_in;
      if (irg_theta) j["theta"] = *irg_theta;
    }
    return parse_config(json{{"model", j}}).model;
  }
};

struct WeightFlags {
  std::optional<std::string> C, B;
  void add(CLI::App* app) {
    app->add_option("--C", C, "generalized damping law, e.g. uniform:0:0.85");
    app->add_option("--B", B, "generalized teleport law, e.g. exp:0.15");
  }
  PageRankConfig build(double c, int N) const {
    json p{{"c", c}, {"N", N}};
    if (C) p["C"] = *C;
    if (B) p["B"] = *B;
    return parse_config(json{{"model", {{"name", "ctbp"}}}, {"pagerank", p}}).pagerank;
  }
};

GeneralizedWeights draw_weights(const PageRankConfig& p, std::size_t n, std::uint64_t seed) {
  RngStream wr = RngStream(seed, streams::kWeights).derive(n);
  GeneralizedWeights w;
  w.C.resize(n);
  w.B.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.C[i] = p.C->sample(wr);
    w.B[i] = p.B->sample(wr);
  }
  return w;
}

// Column R when the file has one, else the last column.
std::vector<double> read_scores(const std::filesystem::path& path, const std::optional<std::string>& column) {
  if (column) return read_value_column(path, column);
  try {
    return read_value_column(path, std::string("R"));
  } catch (const InputError&) {
    return read_value_column(path, std::nullopt);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PageRank on random graphs and their local weak limits"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  // generate
  auto* gen = app.add_subcommand("generate", "sample a random graph");
  ModelFlags gen_model;
  std::size_t gen_n = 1000;
  std::uint64_t gen_seed = 1;
  std::filesystem::path gen_out = "graph.txt";
  gen->add_option("--model", gen_model.model, "dcm | irg | dpa | ctbp")->required();
  gen->add_option("--n", gen_n, "number of vertices")->required();
  gen->add_option("--seed", gen_seed, "master seed")->capture_default_str();
  gen->add_option("--out", gen_out, "edge-list output")->capture_default_str();
  gen_model.add(gen, false);

  // pagerank
  auto* pr = app.add_subcommand("pagerank", "exact and truncated PageRank of a graph file");
  std::filesystem::path pr_graph, pr_out = "scores.csv";
  double pr_c = 0.85, pr_tol = 1e-12;
  int pr_N = 20;
  std::uint64_t pr_seed = 1;
  WeightFlags pr_weights;
  pr->add_option("--graph", pr_graph, "edge-list input")->required()->check(CLI::ExistingFile);
  pr->add_option("--c", pr_c, "damping factor")->capture_default_str();
  pr->add_option("--N", pr_N, "truncation order")->capture_default_str();
  pr->add_option("--tol", pr_tol, "solver tolerance")->capture_default_str();
  pr->add_option("--seed", pr_seed, "seed for generalized weights")->capture_default_str();
  pr->add_option("--out", pr_out, "scores CSV")->capture_default_str();
  pr_weights.add(pr);

  // census
  auto* cen = app.add_subcommand("census", "rooted neighborhood census of a graph file");
  std::filesystem::path cen_graph, cen_out = "census.csv";
  std::uint32_t cen_k = 2;
  std::optional<std::size_t> cen_sample;
  std::uint64_t cen_seed = 1;
  cen->add_option("--graph", cen_graph, "edge-list input")->required()->check(CLI::ExistingFile);
  cen->add_option("--k", cen_k, "depth")->capture_default_str();
  cen->add_option("--sample", cen_sample, "number of distinct uniform roots (default all)");
  cen->add_option("--seed", cen_seed, "root sampling seed")->capture_default_str();
  cen->add_option("--out", cen_out, "census CSV")->capture_default_str();

  // limit-sample
  auto* lim = app.add_subcommand("limit-sample", "root PageRank pool of a limit law");
  ModelFlags lim_model;
  lim_model.model = "gw";
  std::size_t lim_M = 100'000;
  std::uint32_t lim_N = 20;
  double lim_c = 0.85;
  std::uint64_t lim_seed = 1;
  std::filesystem::path lim_out = "limit_pool.csv";
  WeightFlags lim_weights;
  lim->add_option("--model", lim_model.model, "gw | ctbp | polya")->capture_default_str();
  lim->add_option("--M", lim_M, "pool size")->capture_default_str();
  lim->add_option("--N", lim_N, "depth")->capture_default_str();
  lim->add_option("--c", lim_c, "damping factor")->capture_default_str();
  lim->add_option("--seed", lim_seed, "master seed")->capture_default_str();
  lim->add_option("--out", lim_out, "pool CSV")->capture_default_str();
  lim_model.add(lim, true);
  lim_weights.add(lim);

  // compare
  auto* cmp = app.add_subcommand("compare", "KS between tail samples or TV between censuses");
  std::optional<std::filesystem::path> cmp_graph, cmp_limit, cmp_ca, cmp_cb;
  std::optional<std::string> cmp_gcol, cmp_lcol;
  std::uint32_t cmp_k = 2;
  cmp->add_option("--graph-tails", cmp_graph, "CSV of graph-side scores")->check(CLI::ExistingFile);
  cmp->add_option("--limit-tails", cmp_limit, "CSV of limit-side scores")->check(CLI::ExistingFile);
  cmp->add_option("--graph-column", cmp_gcol, "column name (default R if present, else the last)");
  cmp->add_option("--limit-column", cmp_lcol, "column name (default R if present, else the last)");
  cmp->add_option("--census-a", cmp_ca, "census CSV")->check(CLI::ExistingFile);
  cmp->add_option("--census-b", cmp_cb, "census CSV")->check(CLI::ExistingFile);
  cmp->add_option("--k", cmp_k, "census depth")->capture_default_str();

  // verify
  auto* ver = app.add_subcommand("verify", "check the PageRank invariants on a graph file");
  std::filesystem::path ver_graph;
  std::vector<double> ver_c{0.5, 0.85};
  int ver_N = 20;
  ver->add_option("--graph", ver_graph, "edge-list input")->required()->check(CLI::ExistingFile);
  ver->add_option("--c", ver_c, "damping factors")->capture_default_str();
  ver->add_option("--N", ver_N, "largest truncation order")->capture_default_str();

  // run
  auto* run = app.add_subcommand("run", "full experiment from a JSON config");
  std::filesystem::path run_config, run_out = "out";
  run->add_option("--config", run_config, "JSON config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto model = gen_model.build(false);
      RngStream rng(gen_seed, streams::kGraph);
      const auto g = generate(model, gen_n, rng);
      write_edge_list(gen_out, g);
      ExperimentConfig cfg;
      cfg.model = model;
      json meta{{"model", to_json(cfg)["model"]}, {"n", gen_n}, {"seed", gen_seed}, {"stream", streams::kGraph}};
      meta["degrees"] = degree_stats(g);
      write_json(sidecar(gen_out), meta);
      std::cout << gen_out.string() << '\n';
      return kOk;
    }

    if (*pr) {
      const auto data = read_edge_list(pr_graph);
      const auto& g = data.graph;
      const auto pc = pr_weights.build(pr_c, pr_N);
      PageRankParams params{pc.c, pr_tol, 10'000, threads};
      PageRankVector exact, trunc;
      if (pc.generalized()) {
        const auto w = draw_weights(pc, g.num_vertices(), pr_seed);
        exact = solve_generalized(g, w, pr_tol, 10'000, threads);
        trunc = generalized_truncated(g, w, pr_N, threads);
      } else {
        exact = solve_pagerank(g, params);
        trunc = pagerank_truncated(g, params, pr_N);
      }
      {
        std::ofstream out(pr_out);
        if (!out) throw InputError("cannot write " + pr_out.string());
        out << "vertex,R,R_N\n";
        for (std::size_t i = 0; i < exact.values.size(); ++i) {
          out << i << ',' << format_double(exact.values[i]) << ',' << format_double(trunc.values[i]) << '\n';
        }
      }
      json meta{{"graph", pr_graph.string()}, {"c", pr_c}, {"N", pr_N}, {"iterations", exact.iterations},
                {"residual", exact.residual}, {"sum_R", exact.sum()}, {"n", g.num_vertices()}};
      int status = kOk;
      try {
        const auto gap = truncation_gap(exact, trunc);
        meta["mean_gap"] = gap.mean_gap;
        meta["bound"] = gap.bound;
        meta["gap_ok"] = true;
      } catch (const InvariantViolation& e) {
        meta["gap_ok"] = false;
        meta["gap_error"] = e.what();
        std::cerr << e.what() << '\n';
        status = kViolation;
      }
      write_json(sidecar(pr_out), meta);
      std::cout << "mean gap " << show(meta.value("mean_gap", std::nan(""))) << " bound "
                << show(std::pow(exact.params.c, pr_N + 1)) << '\n';
      return status;
    }

    if (*cen) {
      const auto data = read_edge_list(cen_graph);
      const auto mode = cen_sample ? CensusMode::sample(*cen_sample) : CensusMode::full();
      const auto c = census(data.graph, cen_k, mode, RngStream(cen_seed, streams::kCensus), threads);
      std::ofstream out(cen_out);
      if (!out) throw InputError("cannot write " + cen_out.string());
      write_census_csv(out, c);
      std::cout << c.classes.size() << " classes over " << c.total << " roots\n";
      return kOk;
    }

    if (*lim) {
      const auto model = lim_model.build(true);
      const auto pc = lim_weights.build(lim_c, static_cast<int>(lim_N));
      const LimitSampler sampler(model);
      auto pool = sample_pool(lim_M, RngStream(lim_seed, streams::kLimits), threads, [&](RngStream& r, LimitTree& t) {
        sampler(lim_N, r, t);
        return limit_score(pc, lim_N, r, t);
      });
      std::ofstream out(lim_out);
      if (!out) throw InputError("cannot write " + lim_out.string());
      out << "R\n";
      double mean = 0.0;
      for (double r : pool) {
        out << format_double(r) << '\n';
        mean += r / static_cast<double>(pool.size());
      }
      ExperimentConfig cfg;
      cfg.model = model;
      json meta{{"sampler", sampler.name()}, {"model", to_json(cfg)["model"]}, {"N", lim_N}, {"M", lim_M},
                {"c", lim_c}, {"seed", lim_seed}, {"mean_R", mean}};
      if (model.name == "ctbp") meta["alpha_star"] = sampler.alpha();
      write_json(sidecar(lim_out), meta);
      std::cout << "mean R " << format_double(mean) << '\n';
      return kOk;
    }

    if (*cmp) {
      if (cmp_graph && cmp_limit) {
        const auto a = TailSample::from(read_scores(*cmp_graph, cmp_gcol));
        const auto b = TailSample::from(read_scores(*cmp_limit, cmp_lcol));
        std::cout << format_double(ks_distance(a, b)) << '\n';
        return kOk;
      }
      if (cmp_ca && cmp_cb) {
        std::ifstream a(*cmp_ca), b(*cmp_cb);
        const auto ca = read_census_csv(a, cmp_k, cmp_ca->string());
        const auto cb = read_census_csv(b, cmp_k, cmp_cb->string());
        std::cout << format_double(tv_distance(ca, cb)) << '\n';
        return kOk;
      }
      throw UsageError("compare: give --graph-tails with --limit-tails, or --census-a with --census-b");
    }

    if (*ver) {
      const auto data = read_edge_list(ver_graph);
      const auto& g = data.graph;
      const double n = static_cast<double>(g.num_vertices());
      bool ok = true;
      auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        std::cout << (pass ? "ok   " : "FAIL ") << name << ": " << detail << '\n';
        ok = ok && pass;
      };
      for (double c : ver_c) {
        const PageRankParams params{c, 1e-13, 10'000, threads};
        const auto exact = solve_pagerank(g, params);
        const std::string tag = " c=" + show(c);
        double worst = 0.0;
        bool gap_ok = true;
        for (int N = 0; N <= ver_N; ++N) {
          try {
            const auto gap = truncation_gap(exact, pagerank_truncated(g, params, N));
            worst = std::max(worst, gap.mean_gap / gap.bound);
          } catch (const InvariantViolation& e) {
            gap_ok = false;
            report("truncation bound" + tag + " N=" + std::to_string(N), false, e.what());
          }
        }
        if (gap_ok) report("truncation bound" + tag, true, "N=0.." + std::to_string(ver_N) + ", max gap/bound " + show(worst));
        const double sum = exact.sum();
        if (g.num_dangling() == 0) {
          report("mass identity" + tag, std::abs(sum - n) <= 1e-8 * n, "sum R - n = " + show(sum - n));
        } else {
          report("mass bound" + tag, sum <= n * (1.0 + 1e-12), "sum R - n = " + show(sum - n));
        }
        try {
          report("lower bound" + tag, true, "min margin " + show(lower_bound_check(g, exact)));
        } catch (const InvariantViolation& e) {
          report("lower bound" + tag, false, e.what());
        }
      }
      return ok ? kOk : kViolation;
    }

    if (*run) {
      auto cfg = load_config(run_config);
      if (app.get_option("--threads")->count() > 0) cfg.threads = threads;
      const auto outcome = run_experiment(cfg, run_out);
      std::cout << (outcome.invariants_ok ? "ok" : "invariant violation") << ": " << (run_out / "record.json").string()
                << '\n';
      return outcome.invariants_ok ? kOk : kViolation;
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kOk;
}
