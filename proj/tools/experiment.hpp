#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lwpr/generators.hpp"
#include "lwpr/laws.hpp"
#include "lwpr/limit_tree.hpp"
#include "lwpr/limits.hpp"
#include "lwpr/rng.hpp"

namespace lwpr::tools {

using json = nlohmann::ordered_json;

struct ModelConfig {
  std::string name = "dcm";  // dcm | irg | dpa | ctbp
  BiDegreeLaw law;           // dcm
  ScalarLaw w_out = ScalarLaw::pareto(1.0, 2.5);
  ScalarLaw w_in = ScalarLaw::pareto(1.0, 2.5);
  std::optional<double> irg_theta;
  PamParams pam;
  CtbpParams ctbp;
};

struct PageRankConfig {
  double c = 0.85;
  int N = 20;
  double tol = 1e-12;
  std::optional<ScalarLaw> C;
  std::optional<ScalarLaw> B;
  bool generalized() const { return C.has_value(); }
};

struct LimitConfig {
  bool enabled = true;
  std::size_t M = 100'000;
  std::optional<std::uint32_t> depth;  // defaults to pagerank.N
};

struct ComparisonConfig {
  std::vector<std::uint32_t> census_depths{1, 2};
  std::vector<double> thresholds{0.5, 1.0, 2.0, 5.0, 10.0};
  std::optional<std::size_t> census_sample;  // full census when unset
  std::optional<std::size_t> hill_top;       // sqrt(n) when unset
};

struct ExperimentConfig {
  ModelConfig model;
  PageRankConfig pagerank;
  std::vector<std::size_t> sizes{1000};
  LimitConfig limit;
  ComparisonConfig comparison;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
json to_json(const ExperimentConfig& cfg);

DirectedMultigraph generate(const ModelConfig& m, std::size_t n, RngStream& rng);
// Realized degree statistics for metadata sidecars.
json degree_stats(const DirectedMultigraph& g);

// Limit object matching the model; false when the model has none.
bool has_limit(const ModelConfig& m);

class LimitSampler {
 public:
  explicit LimitSampler(const ModelConfig& m);
  void operator()(std::uint32_t depth, RngStream& rng, LimitTree& out) const;
  const std::string& name() const { return name_; }
  // Malthusian parameter; ctbp only.
  double alpha() const { return alpha_; }

 private:
  ModelConfig model_;
  BiDegreeLaw biased_;
  PolyaParams polya_;
  std::string name_;
  double alpha_ = 0.0;
};
// Root score of a sampled limit tree; draws (C, B) when configured.
double limit_score(const PageRankConfig& p, std::uint32_t depth, RngStream& rng, LimitTree& t);

struct RunOutcome {
  json record;
  bool invariants_ok = true;
};

// Full pipeline into out_dir; on a stage error writes a FAILED marker and rethrows.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

void write_json(const std::filesystem::path& path, const json& j);

}  // namespace lwpr::tools
