#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include "lwpr/census.hpp"
#include "lwpr/edge_list.hpp"
#include "lwpr/error.hpp"
#include "lwpr/limits.hpp"
#include "lwpr/pagerank.hpp"
#include "lwpr/tails.hpp"

namespace lwpr::tools {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
  throw ConfigError(field + ": " + msg);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where.empty() ? "config" : where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) bad(where.empty() ? key : where + "." + key, "unknown field");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  const std::string field = where + "." + key;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad(field, "wrong type (" + std::string(obj.at(key).type_name()) + ")");
  }
}

template <typename T>
void read_optional(const json& obj, const char* key, const std::string& where, std::optional<T>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  T value{};
  read(obj, key, where, value);
  out = value;
}

ScalarLaw read_scalar_law(const json& obj, const char* key, const std::string& where) {
  std::string text;
  read(obj, key, where, text);
  try {
    auto law = ScalarLaw::parse(text);
    law.validate();
    return law;
  } catch (const ConfigError& e) {
    bad(where + "." + key, e.what());
  }
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  check_keys(j, "", {"model", "pagerank", "sizes", "limit", "comparison", "seed", "threads"});

  if (!j.contains("model")) bad("model", "missing");
  const json& m = j.at("model");
  check_keys(m, "model", {"name", "law", "w_out", "w_in", "theta", "m", "delta"});
  read(m, "name", "model", cfg.model.name);
  const std::string& name = cfg.model.name;
  if (name == "dcm") {
    std::string law;
    read(m, "law", "model", law);
    if (law.empty()) bad("model.law", "missing");
    try {
      cfg.model.law = BiDegreeLaw::parse(law);
    } catch (const ConfigError& e) {
      bad("model.law", e.what());
    }
  } else if (name == "irg") {
    if (m.contains("w_out")) cfg.model.w_out = read_scalar_law(m, "w_out", "model");
    if (m.contains("w_in")) cfg.model.w_in = read_scalar_law(m, "w_in", "model");
    read_optional(m, "theta", "model", cfg.model.irg_theta);
    if (cfg.model.irg_theta && !(*cfg.model.irg_theta > 0.0)) bad("model.theta", "must be positive");
  } else if (name == "dpa") {
    read(m, "m", "model", cfg.model.pam.m);
    read(m, "delta", "model", cfg.model.pam.delta);
    try {
      cfg.model.pam.validate();
    } catch (const ConfigError& e) {
      bad("model", e.what());
    }
  } else if (name == "ctbp") {
    read(m, "theta", "model", cfg.model.ctbp.theta);
    if (!(cfg.model.ctbp.theta > 0.0)) bad("model.theta", "must be positive");
  } else {
    bad("model.name", "expected dcm, irg, dpa or ctbp, got '" + name + "'");
  }

  if (j.contains("pagerank")) {
    const json& p = j.at("pagerank");
    check_keys(p, "pagerank", {"c", "N", "tol", "C", "B"});
    read(p, "c", "pagerank", cfg.pagerank.c);
    read(p, "N", "pagerank", cfg.pagerank.N);
    read(p, "tol", "pagerank", cfg.pagerank.tol);
    if (p.contains("C")) cfg.pagerank.C = read_scalar_law(p, "C", "pagerank");
    if (p.contains("B")) cfg.pagerank.B = read_scalar_law(p, "B", "pagerank");
  }
  if (!(cfg.pagerank.c > 0.0 && cfg.pagerank.c < 1.0)) {
    bad("pagerank.c", "must lie in (0,1), got " + format_double(cfg.pagerank.c));
  }
  if (cfg.pagerank.N < 0) bad("pagerank.N", "must be nonnegative");
  if (!(cfg.pagerank.tol > 0.0)) bad("pagerank.tol", "must be positive");
  if (cfg.pagerank.C.has_value() != cfg.pagerank.B.has_value()) bad("pagerank", "C and B must be given together");
  if (cfg.pagerank.C && !(cfg.pagerank.C->sup() < 1.0)) bad("pagerank.C", "sup C must be below 1");

  if (j.contains("sizes")) {
    read(j, "sizes", "config", cfg.sizes);
  }
  if (cfg.sizes.empty()) bad("sizes", "must be nonempty");
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] < 2) bad("sizes", "every n must be at least 2");
    if (i > 0 && cfg.sizes[i] <= cfg.sizes[i - 1]) bad("sizes", "must be strictly ascending");
  }

  if (j.contains("limit")) {
    const json& l = j.at("limit");
    check_keys(l, "limit", {"enabled", "M", "depth"});
    read(l, "enabled", "limit", cfg.limit.enabled);
    read(l, "M", "limit", cfg.limit.M);
    read_optional(l, "depth", "limit", cfg.limit.depth);
    if (cfg.limit.M < 2) bad("limit.M", "must be at least 2");
  }

  if (j.contains("comparison")) {
    const json& c = j.at("comparison");
    check_keys(c, "comparison", {"census_depths", "thresholds", "census_sample", "hill_top"});
    read(c, "census_depths", "comparison", cfg.comparison.census_depths);
    read(c, "thresholds", "comparison", cfg.comparison.thresholds);
    read_optional(c, "census_sample", "comparison", cfg.comparison.census_sample);
    read_optional(c, "hill_top", "comparison", cfg.comparison.hill_top);
    if (!std::is_sorted(cfg.comparison.thresholds.begin(), cfg.comparison.thresholds.end())) {
      bad("comparison.thresholds", "must be ascending");
    }
  }

  read(j, "seed", "config", cfg.seed);
  read(j, "threads", "config", cfg.threads);
  if (cfg.threads < 1) bad("threads", "must be at least 1");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  json model{{"name", cfg.model.name}};
  if (cfg.model.name == "dcm") model["law"] = cfg.model.law.describe();
  if (cfg.model.name == "irg") {
    model["w_out"] = cfg.model.w_out.describe();
    model["w_in"] = cfg.model.w_in.describe();
    model["theta"] = optional_json(cfg.model.irg_theta);
  }
  if (cfg.model.name == "dpa") {
    model["m"] = cfg.model.pam.m;
    model["delta"] = cfg.model.pam.delta;
  }
  if (cfg.model.name == "ctbp") model["theta"] = cfg.model.ctbp.theta;

  json pagerank{{"c", cfg.pagerank.c}, {"N", cfg.pagerank.N}, {"tol", cfg.pagerank.tol}};
  if (cfg.pagerank.generalized()) {
    pagerank["C"] = cfg.pagerank.C->describe();
    pagerank["B"] = cfg.pagerank.B->describe();
  }
  json limit{{"enabled", cfg.limit.enabled}, {"M", cfg.limit.M}};
  limit["depth"] = cfg.limit.depth ? json(*cfg.limit.depth) : json(nullptr);
  json comparison{{"census_depths", cfg.comparison.census_depths}, {"thresholds", cfg.comparison.thresholds}};
  comparison["census_sample"] = cfg.comparison.census_sample ? json(*cfg.comparison.census_sample) : json(nullptr);
  comparison["hill_top"] = cfg.comparison.hill_top ? json(*cfg.comparison.hill_top) : json(nullptr);
  return json{{"model", model},         {"pagerank", pagerank},     {"sizes", cfg.sizes}, {"limit", limit},
              {"comparison", comparison}, {"seed", cfg.seed}, {"threads", cfg.threads}};
}

DirectedMultigraph generate(const ModelConfig& m, std::size_t n, RngStream& rng) {
  if (m.name == "dcm") return gen_dcm(sample_bidegree_sequence(m.law, n, rng), rng);
  if (m.name == "irg") {
    RngStream wr = rng.derive(1);
    std::vector<double> wo(n), wi(n);
    for (std::size_t i = 0; i < n; ++i) {
      wo[i] = m.w_out.sample(wr);
      wi[i] = m.w_in.sample(wr);
    }
    return gen_irg(wo, wi, m.irg_theta, rng);
  }
  if (m.name == "dpa") return gen_dpa(n, m.pam, rng);
  if (m.name == "ctbp") return gen_ctbp_tree(m.ctbp, n, rng).graph;
  throw ConfigError("model.name: unknown model '" + m.name + "'");
}

json degree_stats(const DirectedMultigraph& g) {
  Count max_in = 0, max_out = 0;
  std::uint64_t loops = 0, multi = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    max_in = std::max(max_in, g.in_degree(v));
    max_out = std::max(max_out, g.out_degree(v));
    for (const Arc& a : g.out_arcs(v)) {
      if (a.vertex == v) loops += a.multiplicity;
      if (a.multiplicity > 1) multi += a.multiplicity - 1;
    }
  }
  const double n = static_cast<double>(g.num_vertices());
  return json{{"n", g.num_vertices()},     {"edges", g.num_edges()},
              {"mean_degree", g.num_edges() / n}, {"max_in_degree", max_in},
              {"max_out_degree", max_out}, {"dangling", g.num_dangling()},
              {"self_loops", loops},       {"extra_parallel_edges", multi}};
}

bool has_limit(const ModelConfig& m) {
  return m.name == "dcm" || m.name == "ctbp" || (m.name == "dpa" && m.pam.m >= 2);
}

LimitSampler::LimitSampler(const ModelConfig& m) : model_(m) {
  if (m.name == "dcm") {
    biased_ = m.law.size_biased();
    name_ = "galton-watson";
  } else if (m.name == "ctbp") {
    alpha_ = malthusian(m.ctbp.theta);
    name_ = "ctbp";
  } else if (m.name == "dpa" && m.pam.m >= 2) {
    polya_.m = m.pam.m;
    polya_.delta = m.pam.delta;
    polya_.validate();
    name_ = "polya";
  } else {
    throw ConfigError("model " + m.name + " has no limit sampler" + (m.name == "dpa" ? " for m < 2" : ""));
  }
}

void LimitSampler::operator()(std::uint32_t depth, RngStream& rng, LimitTree& out) const {
  if (name_ == "galton-watson") {
    sample_gw_limit(model_.law, biased_, depth, rng, out);
  } else if (name_ == "ctbp") {
    sample_ctbp_limit(model_.ctbp.theta, alpha_, rng, out);
  } else {
    sample_polya_limit(polya_, depth, rng, out);
  }
}

double limit_score(const PageRankConfig& p, std::uint32_t depth, RngStream& rng, LimitTree& t) {
  if (!p.generalized()) return root_pagerank(t, p.c, depth);
  assign_weights(t, *p.C, *p.B, rng);
  return root_pagerank_generalized(t, depth);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

struct Invariants {
  json list = json::array();
  bool ok = true;
  void add(const std::string& name, std::optional<std::size_t> n, bool pass, const std::string& detail) {
    json row{{"name", name}};
    row["n"] = n ? json(*n) : json(nullptr);
    row["ok"] = pass;
    row["detail"] = detail;
    list.push_back(row);
    ok = ok && pass;
  }
};

class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::exception& e, bool config)
      : std::runtime_error("stage " + stage + ": " + e.what()), config_(config) {}
  bool config() const { return config_; }

 private:
  bool config_;
};

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ConfigError& e) {
    throw StageError(name, e, true);
  } catch (const std::exception& e) {
    throw StageError(name, e, false);
  }
}

std::size_t hill_top(const ComparisonConfig& c, std::size_t n) {
  const std::size_t k = c.hill_top ? *c.hill_top : static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 2, n / 2);
}

json hill_or_null(const std::vector<double>& values, std::size_t k) {
  try {
    return hill_estimator(TailSample::from(values), k);
  } catch (const UsageError&) {
    return nullptr;
  }
}

void write_scores(const std::filesystem::path& path, const PageRankVector& exact, const PageRankVector& trunc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "vertex,R,R_N\n";
  for (std::size_t i = 0; i < exact.values.size(); ++i) {
    out << i << ',' << format_double(exact.values[i]) << ',' << format_double(trunc.values[i]) << '\n';
  }
}

void write_census(const std::filesystem::path& path, const NeighborhoodCensus& c) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_census_csv(out, c);
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const auto t_start = Clock::now();
  std::filesystem::create_directories(out_dir);
  std::filesystem::remove(out_dir / "FAILED");
  write_json(out_dir / "config.json", to_json(cfg));

  RunOutcome outcome;
  json& rec = outcome.record;
  rec["config"] = to_json(cfg);
  Invariants inv;
  const auto& pc = cfg.pagerank;
  const std::uint32_t depth = cfg.limit.depth ? *cfg.limit.depth : static_cast<std::uint32_t>(pc.N);
  const bool use_limit = cfg.limit.enabled && has_limit(cfg.model);

  try {
    // Limit side, once.
    std::optional<TailSample> limit_tail;
    std::map<std::uint32_t, NeighborhoodCensus> limit_census;
    json lim{{"available", use_limit}};
    if (use_limit) {
      stage("limit", [&] {
        const auto t0 = Clock::now();
        const LimitSampler sampler(cfg.model);
        lim["sampler"] = sampler.name();
        lim["M"] = cfg.limit.M;
        lim["depth"] = depth;
        if (cfg.model.name == "ctbp") lim["alpha_star"] = sampler.alpha();
        auto pool = sample_pool(cfg.limit.M, RngStream(cfg.seed, streams::kLimits), cfg.threads,
                                [&](RngStream& r, LimitTree& t) {
                                  sampler(depth, r, t);
                                  return limit_score(pc, depth, r, t);
                                });
        {
          std::ofstream out(out_dir / "limit_pool.csv");
          out << "R\n";
          for (double r : pool) out << format_double(r) << '\n';
        }
        double mean = 0.0, ss = 0.0;
        for (double r : pool) mean += r;
        mean /= static_cast<double>(pool.size());
        for (double r : pool) ss += (r - mean) * (r - mean);
        const double se = std::sqrt(ss / static_cast<double>(pool.size() - 1) / static_cast<double>(pool.size()));
        lim["mean_R"] = mean;
        lim["se_R"] = se;
        if (!pc.generalized()) {
          inv.add("limit_mean_at_most_one", std::nullopt, mean <= 1.0 + 3.0 * se,
                  "mean " + format_double(mean) + ", se " + format_double(se));
        }
        limit_tail = TailSample::from(std::move(pool), "limit");
        lim["ccdf"] = ccdf(*limit_tail, cfg.comparison.thresholds);
        for (std::uint32_t k : cfg.comparison.census_depths) {
          const std::size_t trees = std::min<std::size_t>(cfg.limit.M, 100'000);
          limit_census[k] = census_limit([&](RngStream& r, LimitTree& t) { sampler(k, r, t); }, k,
                                         trees, RngStream(cfg.seed, streams::kLimits).derive(100 + k), cfg.threads);
          write_census(out_dir / ("census_limit_" + std::to_string(k) + ".csv"), limit_census[k]);
        }
        lim["seconds"] = seconds_since(t0);
      });
    }
    rec["limit"] = lim;

    json sizes = json::array();
    for (std::size_t n : cfg.sizes) {
      const std::string tag = " (n=" + std::to_string(n) + ")";
      json row{{"n", n}};
      json timings;

      auto t0 = Clock::now();
      const auto g = stage("generate" + tag, [&] {
        RngStream rng = RngStream(cfg.seed, streams::kGraph).derive(n);
        return generate(cfg.model, n, rng);
      });
      stage("write graph" + tag, [&] { write_edge_list(out_dir / ("graph_" + std::to_string(n) + ".txt"), g); });
      row["degrees"] = degree_stats(g);
      timings["generate_s"] = seconds_since(t0);

      t0 = Clock::now();
      std::optional<GeneralizedWeights> w;
      if (pc.generalized()) {
        RngStream wr = RngStream(cfg.seed, streams::kWeights).derive(n);
        w.emplace();
        w->C.resize(n);
        w->B.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          w->C[i] = pc.C->sample(wr);
          w->B[i] = pc.B->sample(wr);
        }
      }
      const PageRankParams params{pc.c, pc.tol, 10'000, cfg.threads};
      const auto exact = stage("pagerank" + tag, [&] {
        return w ? solve_generalized(g, *w, pc.tol, 10'000, cfg.threads) : solve_pagerank(g, params);
      });
      const auto trunc = stage("pagerank truncated" + tag, [&] {
        return w ? generalized_truncated(g, *w, pc.N, cfg.threads) : pagerank_truncated(g, params, pc.N);
      });
      stage("write scores" + tag, [&] { write_scores(out_dir / ("scores_" + std::to_string(n) + ".csv"), exact, trunc); });
      row["iterations"] = exact.iterations;
      row["mean_R"] = exact.mean();
      row["sum_R_over_n"] = exact.sum() / static_cast<double>(n);
      timings["pagerank_s"] = seconds_since(t0);

      // Invariants.
      try {
        const auto gap = truncation_gap(exact, trunc, 1e-10);
        row["truncation"] = {{"N", pc.N}, {"mean_gap", gap.mean_gap}, {"bound", gap.bound}, {"ok", true}};
        inv.add("truncation_bound", n, true, "gap " + format_double(gap.mean_gap) + " <= " + format_double(gap.bound));
      } catch (const InvariantViolation& e) {
        row["truncation"] = {{"N", pc.N}, {"ok", false}, {"error", e.what()}};
        inv.add("truncation_bound", n, false, e.what());
      }
      if (!w) {
        try {
          const double margin = lower_bound_check(g, exact);
          inv.add("lower_bound", n, true, "min margin " + format_double(margin));
        } catch (const InvariantViolation& e) {
          inv.add("lower_bound", n, false, e.what());
        }
        const double sum = exact.sum();
        const double dn = static_cast<double>(n);
        if (g.num_dangling() == 0) {
          const double err = std::abs(sum - dn);
          inv.add("mass_identity", n, err <= 1e-8 * dn, "|sum R - n| = " + format_double(err));
        } else {
          inv.add("mass_identity", n, sum <= dn * (1.0 + 1e-12), "sum R - n = " + format_double(sum - dn));
        }
      }

      // Tails.
      t0 = Clock::now();
      auto graph_tail = TailSample::from(exact.values, "graph");
      row["ccdf"] = ccdf(graph_tail, cfg.comparison.thresholds);
      if (limit_tail) row["ks_to_limit"] = ks_distance(graph_tail, *limit_tail);
      std::vector<double> in_deg(n);
      for (Vertex v = 0; v < n; ++v) in_deg[v] = g.in_degree(v);
      const std::size_t top = hill_top(cfg.comparison, n);
      row["hill"] = {{"top_k", top}, {"in_degree", hill_or_null(in_deg, top)},
                     {"pagerank", hill_or_null(graph_tail.values, top)}};
      timings["tails_s"] = seconds_since(t0);

      // Censuses.
      t0 = Clock::now();
      json censuses = json::array();
      for (std::uint32_t k : cfg.comparison.census_depths) {
        const auto mode = cfg.comparison.census_sample && *cfg.comparison.census_sample < n
                              ? CensusMode::sample(*cfg.comparison.census_sample)
                              : CensusMode::full();
        const auto c = stage("census k=" + std::to_string(k) + tag, [&] {
          return census(g, k, mode, RngStream(cfg.seed, streams::kCensus).derive(n), cfg.threads);
        });
        write_census(out_dir / ("census_" + std::to_string(n) + "_" + std::to_string(k) + ".csv"), c);
        json entry{{"k", k}, {"roots", c.total}, {"classes", c.classes.size()}};
        if (limit_census.count(k)) entry["tv_to_limit"] = tv_distance(c, limit_census.at(k));
        censuses.push_back(entry);
      }
      row["census"] = censuses;
      timings["census_s"] = seconds_since(t0);
      row["timings"] = timings;
      sizes.push_back(row);
      rec["sizes"] = sizes;
    }
    rec["sizes"] = sizes;
  } catch (const StageError& e) {
    rec["invariants"] = inv.list;
    rec["status"] = "failed";
    rec["error"] = e.what();
    write_json(out_dir / "record.json", rec);
    std::ofstream(out_dir / "FAILED") << e.what() << '\n';
    if (e.config()) throw ConfigError(e.what());
    throw;
  }

  rec["invariants"] = inv.list;
  rec["status"] = inv.ok ? "ok" : "invariant_violation";
  rec["total_seconds"] = seconds_since(t_start);
  outcome.invariants_ok = inv.ok;
  write_json(out_dir / "record.json", rec);
  return outcome;
}

}  // namespace lwpr::tools
