#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lwpr {

// Sorted sample of scores, tagged with where it came from.
struct TailSample {
  std::vector<double> values;
  std::string provenance;

  static TailSample from(std::vector<double> values, std::string provenance = {});
  std::size_t size() const noexcept { return values.size(); }
};

// sup_r |F_a(r) - F_b(r)| by a merge scan over both sorted samples.
double ks_distance(const TailSample& a, const TailSample& b);

// Fraction of the sample strictly above each threshold; thresholds ascending.
std::vector<double> ccdf(const TailSample& a, std::span<const double> thresholds);

// Hill estimate of the tail index from the top_k largest values.
double hill_estimator(const TailSample& a, std::size_t top_k);

// CSV `r,ccdf`.
void write_tail_csv(std::ostream& out, const TailSample& a, std::span<const double> thresholds);

}  // namespace lwpr
