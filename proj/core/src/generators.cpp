#include "lwpr/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "lwpr/error.hpp"

namespace lwpr {

namespace {

// Binary indexed tree over nonnegative doubles with weighted search.
class Fenwick {
 public:
  explicit Fenwick(std::size_t capacity) : tree_(capacity + 1, 0.0) {
    top_ = 1;
    while (top_ * 2 <= capacity) top_ *= 2;
  }

  void add(std::size_t i, double w) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += w;
  }

  double prefix(std::size_t count) const {
    double s = 0.0;
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

  // Smallest i with prefix(i + 1) > u, clamped to the last index below `limit`.
  std::size_t find(double u, std::size_t limit) const {
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] <= u) {
        pos = next;
        u -= tree_[next];
      }
    }
    return std::min(pos, limit - 1);
  }

 private:
  std::vector<double> tree_;
  std::size_t top_ = 1;
};

}  // namespace

BiDegreeSequence sample_bidegree_sequence(const BiDegreeLaw& law, std::size_t n, RngStream& rng) {
  if (n < 1) throw UsageError("sample_bidegree_sequence: n must be at least 1");
  BiDegreeSequence seq;
  seq.d_out.resize(n);
  seq.d_in.resize(n);
  std::uint64_t sum_out = 0, sum_in = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto [h, l] = law.sample(rng);
    seq.d_out[i] = h;
    seq.d_in[i] = l;
    sum_out += h;
    sum_in += l;
  }
  std::vector<Count>& low = sum_out < sum_in ? seq.d_out : seq.d_in;
  std::uint64_t deficit = sum_out < sum_in ? sum_in - sum_out : sum_out - sum_in;
  seq.repaired = deficit;
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  while (deficit > 0) {
    const std::size_t r = static_cast<std::size_t>(std::min<std::uint64_t>(deficit, n));
    for (std::size_t j = 0; j < r; ++j) {
      std::swap(pool[j], pool[j + rng.below(n - j)]);
      ++low[pool[j]];
    }
    deficit -= r;
  }
  seq.L = std::max(sum_out, sum_in);
  return seq;
}

DirectedMultigraph gen_dcm(const BiDegreeSequence& seq, RngStream& rng) {
  const std::size_t n = seq.d_out.size();
  if (seq.d_in.size() != n) throw UsageError("gen_dcm: degree arrays differ in length");
  std::vector<Vertex> out_stubs, in_stubs;
  for (std::size_t i = 0; i < n; ++i) {
    out_stubs.insert(out_stubs.end(), seq.d_out[i], static_cast<Vertex>(i));
    in_stubs.insert(in_stubs.end(), seq.d_in[i], static_cast<Vertex>(i));
  }
  if (out_stubs.size() != in_stubs.size()) throw UsageError("gen_dcm: degree sums differ");
  for (std::size_t k = in_stubs.size(); k > 1; --k) {
    std::swap(in_stubs[k - 1], in_stubs[rng.below(k)]);
  }
  return build_graph(out_stubs, in_stubs, n);
}

DirectedMultigraph gen_irg(std::span<const double> w_out, std::span<const double> w_in,
                           std::optional<double> theta, RngStream& rng) {
  const std::size_t n = w_out.size();
  if (w_in.size() != n) throw UsageError("gen_irg: weight arrays differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(w_out[i] > 0.0) || !(w_in[i] > 0.0)) throw ConfigError("gen_irg: weights must be positive");
  }
  double th = theta ? *theta : (n ? std::accumulate(w_in.begin(), w_in.end(), 0.0) / n : 1.0);
  if (!(th > 0.0)) throw ConfigError("gen_irg: theta must be positive");

  // Targets by decreasing w_in make the per-source probabilities nonincreasing,
  // so geometric skips plus thinning sample each row exactly.
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return w_in[a] > w_in[b]; });
  const double scale = th * static_cast<double>(n);

  std::vector<Vertex> src, dst;
  for (std::size_t i = 0; i < n; ++i) {
    auto prob = [&](std::size_t j) { return std::min(1.0, w_out[i] * w_in[order[j]] / scale); };
    std::size_t j = 0;
    double p = n ? prob(0) : 0.0;
    while (j < n && p > 0.0) {
      if (p < 1.0) {
        const double skip = std::floor(std::log(rng.uniform_positive()) / std::log1p(-p));
        if (skip >= static_cast<double>(n - j)) break;
        j += static_cast<std::size_t>(skip);
      }
      const double q = prob(j);
      if (q >= p || rng.uniform() < q / p) {
        if (order[j] != i) {
          src.push_back(static_cast<Vertex>(i));
          dst.push_back(order[j]);
        }
      }
      p = q;
      ++j;
    }
  }
  return build_graph(src, dst, n);
}

void PamParams::validate() const {
  if (m < 1) throw ConfigError("PAM: m must be at least 1");
  if (!(delta > -static_cast<double>(m))) throw ConfigError("PAM: delta must exceed -m");
}

DirectedMultigraph gen_dpa(std::size_t n, const PamParams& p, RngStream& rng) {
  p.validate();
  if (n < 2) throw UsageError("gen_dpa: n must be at least 2");
  const Count m = p.m;
  const double delta = p.delta;
  std::vector<Vertex> src, dst;
  src.reserve(static_cast<std::size_t>(m) * (n - 1));
  dst.reserve(static_cast<std::size_t>(m) * (n - 1));
  for (Count e = 0; e < m; ++e) {
    src.push_back(1);
    dst.push_back(0);
  }
  Fenwick weights(n);
  weights.add(0, m + delta);
  weights.add(1, m + delta);
  for (std::size_t t = 2; t < n; ++t) {
    for (Count l = 1; l <= m; ++l) {
      const double denom = 2.0 * m * static_cast<double>(t - 1) + static_cast<double>(t) * delta + (l - 1);
      const double total = weights.prefix(t);
      if (std::abs(total - denom) > 1e-12 * std::max(1.0, denom)) {
        throw InvariantViolation("gen_dpa: attachment weights sum to " + std::to_string(total) +
                                 " instead of " + std::to_string(denom));
      }
      const std::size_t target = weights.find(rng.uniform() * denom, t);
      src.push_back(static_cast<Vertex>(t));
      dst.push_back(static_cast<Vertex>(target));
      weights.add(target, 1.0);
    }
    weights.add(t, m + delta);
  }
  return build_graph(src, dst, n);
}

void CtbpParams::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("CTBP: theta must be positive");
}

CtbpTree gen_ctbp_tree(const CtbpParams& p, std::size_t target_n, RngStream& rng) {
  p.validate();
  if (target_n < 1) throw UsageError("gen_ctbp_tree: target_n must be at least 1");
  CtbpTree out;
  out.birth_times.reserve(target_n);
  out.birth_times.push_back(0.0);
  std::vector<Count> children{0};
  std::vector<Vertex> src, dst;
  using Event = std::pair<double, Vertex>;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  queue.push({rng.exponential(p.theta), 0});
  while (out.birth_times.size() < target_n) {
    const auto [t, parent] = queue.top();
    queue.pop();
    const auto child = static_cast<Vertex>(out.birth_times.size());
    out.birth_times.push_back(t);
    children.push_back(0);
    src.push_back(child);
    dst.push_back(parent);
    ++children[parent];
    queue.push({t + rng.exponential(children[parent] + p.theta), parent});
    queue.push({t + rng.exponential(p.theta), child});
  }
  out.graph = build_graph(src, dst, target_n);
  return out;
}

}  // namespace lwpr
