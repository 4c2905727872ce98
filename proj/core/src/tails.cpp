#include "lwpr/tails.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "lwpr/edge_list.hpp"
#include "lwpr/error.hpp"

namespace lwpr {

TailSample TailSample::from(std::vector<double> values, std::string provenance) {
  for (double v : values) {
    if (std::isnan(v)) throw UsageError("tail sample contains NaN");
  }
  std::sort(values.begin(), values.end());
  return TailSample{std::move(values), std::move(provenance)};
}

double ks_distance(const TailSample& a, const TailSample& b) {
  if (a.values.empty() || b.values.empty()) throw UsageError("ks_distance: empty sample");
  const auto& x = a.values;
  const auto& y = b.values;
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    sup = std::max(sup, std::abs(i / nx - j / ny));
  }
  return sup;
}

std::vector<double> ccdf(const TailSample& a, std::span<const double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) throw UsageError("ccdf: thresholds must be ascending");
  std::vector<double> out;
  out.reserve(thresholds.size());
  const double n = static_cast<double>(a.values.size());
  for (double r : thresholds) {
    const auto above = a.values.end() - std::upper_bound(a.values.begin(), a.values.end(), r);
    out.push_back(n > 0 ? static_cast<double>(above) / n : 0.0);
  }
  return out;
}

double hill_estimator(const TailSample& a, std::size_t top_k) {
  const std::size_t n = a.values.size();
  if (top_k < 2 || top_k > n / 2) {
    throw UsageError("hill_estimator: top_k = " + std::to_string(top_k) + " must lie in [2, n/2] for n = " +
                     std::to_string(n));
  }
  const double threshold = a.values[n - top_k - 1];
  if (!(threshold > 0.0)) throw UsageError("hill_estimator: nonpositive values in the top block");
  double s = 0.0;
  for (std::size_t i = n - top_k; i < n; ++i) s += std::log(a.values[i] / threshold);
  if (!(s > 0.0)) throw UsageError("hill_estimator: top block has zero log spacings");
  return static_cast<double>(top_k) / s;
}

void write_tail_csv(std::ostream& out, const TailSample& a, std::span<const double> thresholds) {
  const auto f = ccdf(a, thresholds);
  out << "r,ccdf\n";
  for (std::size_t i = 0; i < f.size(); ++i) out << format_double(thresholds[i]) << ',' << format_double(f[i]) << '\n';
}

}  // namespace lwpr
