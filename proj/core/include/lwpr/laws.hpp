#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lwpr/graph.hpp"
#include "lwpr/rng.hpp"

namespace lwpr {

// Joint (out-degree, in-degree) law on a finite support.
class BiDegreeLaw {
 public:
  struct Atom {
    Count out = 0;
    Count in = 0;
    double p = 0.0;
  };

  BiDegreeLaw() = default;
  // Probabilities must be nonnegative and sum to 1 within 1e-9 (they are
  // renormalized). Throws ConfigError when |E[out] - E[in]| > mean_tol.
  explicit BiDegreeLaw(std::vector<Atom> atoms, double mean_tol = 1e-9);

  static BiDegreeLaw point(Count out, Count in);
  // Product of two marginals given as pmfs on {0, 1, ...}.
  static BiDegreeLaw independent(const std::vector<double>& out_pmf, const std::vector<double>& in_pmf,
                                 double mean_tol = 1e-9);
  // "h:l:p,h:l:p,..." as used on the command line.
  static BiDegreeLaw parse(const std::string& text, double mean_tol = 1e-9);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double mean_out() const noexcept { return mean_out_; }
  double mean_in() const noexcept { return mean_in_; }
  // p*(h,l) = h p(h,l) / E[out]; drops atoms with h = 0. No mean check.
  BiDegreeLaw size_biased() const;
  double mass_at_zero_out() const;

  std::pair<Count, Count> sample(RngStream& rng) const;

  std::string describe() const;

 private:
  struct Sampler;
  std::vector<Atom> atoms_;
  double mean_out_ = 0.0;
  double mean_in_ = 0.0;
  std::shared_ptr<const Sampler> sampler_;
};

// Real-valued law for generalized weights.
struct ScalarLaw {
  enum class Kind { constant, uniform, exponential, pareto };
  Kind kind = Kind::constant;
  // constant: a; uniform: [a, b); exponential: mean a; pareto: xmin a, index b.
  double a = 0.0;
  double b = 0.0;

  static ScalarLaw constant(double v) { return {Kind::constant, v, 0.0}; }
  static ScalarLaw uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
  static ScalarLaw exponential(double mean) { return {Kind::exponential, mean, 0.0}; }
  static ScalarLaw pareto(double xmin, double alpha) { return {Kind::pareto, xmin, alpha}; }
  // "const:0.5", "uniform:0:0.85", "exp:0.15", "pareto:1:2"
  static ScalarLaw parse(const std::string& text);

  void validate() const;
  double sample(RngStream& rng) const;
  double mean() const;
  // Essential supremum (infinity when unbounded).
  double sup() const;
  std::string describe() const;
};

}  // namespace lwpr
