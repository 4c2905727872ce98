#include "lwpr/canonical.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "lwpr/error.hpp"

namespace lwpr {

namespace {

void put_varint(std::string& out, std::uint64_t x) {
  while (x >= 0x80) {
    out.push_back(static_cast<char>((x & 0x7f) | 0x80));
    x >>= 7;
  }
  out.push_back(static_cast<char>(x));
}

// Sorted-subtree (AHU) code: '(' mark child-codes... ')'. The varint after
// '(' is self-delimiting, so the encoding is injective.
CanonicalCode tree_code(const MarkedNeighborhood& nb) {
  const std::size_t n = nb.nodes.size();
  std::vector<std::vector<std::uint32_t>> children(n);
  for (const Edge& e : nb.edges) children[e.target].push_back(e.source);

  std::vector<std::string> code(n);
  std::vector<std::string> parts;
  // Nodes are in nondecreasing depth order, so reverse order visits children first.
  for (std::size_t idx = n; idx-- > 0;) {
    parts.clear();
    for (auto c : children[idx]) parts.push_back(std::move(code[c]));
    std::sort(parts.begin(), parts.end());
    std::string& s = code[idx];
    s.push_back('(');
    put_varint(s, nb.nodes[idx].mark);
    for (auto& p : parts) s += p;
    s.push_back(')');
  }
  return CanonicalCode{"T" + code[0]};
}

class GeneralCanonizer {
 public:
  GeneralCanonizer(const MarkedNeighborhood& nb, std::size_t leaf_limit)
      : nb_(nb), n_(nb.nodes.size()), leaf_limit_(leaf_limit), out_(n_), in_(n_) {
    for (const Edge& e : nb.edges) {
      out_[e.source].push_back({e.target, e.multiplicity});
      in_[e.target].push_back({e.source, e.multiplicity});
    }
  }

  CanonicalCode run() {
    std::vector<std::vector<std::uint64_t>> initial(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      initial[v] = {v == MarkedNeighborhood::root ? 0u : 1u, nb_.nodes[v].depth, nb_.nodes[v].mark};
    }
    std::vector<std::uint32_t> path;
    search(rank(initial), path);
    return CanonicalCode{"G" + best_.code};
  }

 private:
  using Colors = std::vector<std::uint32_t>;

  static Colors rank(const std::vector<std::vector<std::uint64_t>>& sigs) {
    std::vector<std::uint32_t> order(sigs.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sigs[a] < sigs[b]; });
    Colors colors(sigs.size());
    std::uint32_t c = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && sigs[order[i]] != sigs[order[i - 1]]) ++c;
      colors[order[i]] = c;
    }
    return colors;
  }

  static std::uint32_t num_colors(const Colors& colors) {
    return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
  }

  Colors refine(Colors colors) const {
    std::vector<std::vector<std::uint64_t>> sigs(n_);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> tmp;
    auto count = num_colors(colors);
    while (true) {
      for (std::size_t v = 0; v < n_; ++v) {
        auto& s = sigs[v];
        s.clear();
        s.push_back(colors[v]);
        for (const auto* adj : {&out_[v], &in_[v]}) {
          tmp.clear();
          for (const Arc& a : *adj) tmp.emplace_back(colors[a.vertex], a.multiplicity);
          std::sort(tmp.begin(), tmp.end());
          s.push_back(tmp.size());
          for (auto [c, m] : tmp) {
            s.push_back(c);
            s.push_back(m);
          }
        }
      }
      Colors next = rank(sigs);
      auto next_count = num_colors(next);
      colors = std::move(next);
      if (next_count == count) return colors;
      count = next_count;
    }
  }

  // Pairs of same-coloured, mutually non-adjacent vertices with identical
  // neighbour multisets are exchanged by an automorphism; branching on one
  // of them suffices.
  std::vector<std::uint32_t> branch_representatives(const std::vector<std::uint32_t>& cell) const {
    std::map<std::pair<std::vector<std::pair<std::uint32_t, Count>>, std::vector<std::pair<std::uint32_t, Count>>>,
             std::uint32_t>
        seen;
    std::vector<std::uint32_t> reps;
    for (auto v : cell) {
      std::vector<std::pair<std::uint32_t, Count>> o, i;
      bool self = false;
      for (const Arc& a : out_[v]) {
        if (a.vertex == v) self = true;
        o.emplace_back(a.vertex, a.multiplicity);
      }
      for (const Arc& a : in_[v]) i.emplace_back(a.vertex, a.multiplicity);
      if (self) {
        reps.push_back(v);
        continue;
      }
      std::sort(o.begin(), o.end());
      std::sort(i.begin(), i.end());
      auto [it, inserted] = seen.emplace(std::make_pair(std::move(o), std::move(i)), v);
      if (inserted) reps.push_back(v);
    }
    return reps;
  }

  static constexpr std::size_t kNoJump = std::numeric_limits<std::size_t>::max();

  struct Leaf {
    std::string code;
    Colors label;
    std::vector<std::uint32_t> path;
  };

  static std::size_t common_prefix(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return i;
  }

  // Two leaves with equal codes give the automorphism x -> ref^{-1}(label(x)).
  void add_generator(const Colors& ref, const Colors& label) {
    std::vector<std::uint32_t> inv(n_);
    for (std::uint32_t v = 0; v < n_; ++v) inv[ref[v]] = v;
    std::vector<std::uint32_t> gamma(n_);
    for (std::uint32_t v = 0; v < n_; ++v) gamma[v] = inv[label[v]];
    generators_.push_back(std::move(gamma));
  }

  // Orbits of the group generated by the stored automorphisms that fix `path` pointwise.
  std::vector<std::uint32_t> orbits(const std::vector<std::uint32_t>& path) const {
    std::vector<std::uint32_t> parent(n_);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& g : generators_) {
      bool fixes = true;
      for (auto p : path) fixes = fixes && g[p] == p;
      if (!fixes) continue;
      for (std::uint32_t v = 0; v < n_; ++v) {
        auto a = find(v), b = find(g[v]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    for (std::uint32_t v = 0; v < n_; ++v) parent[v] = find(v);
    return parent;
  }

  // Depth-first individualization-refinement. Returns the level to jump back
  // to when the subtree just finished is known to be equivalent to an explored one.
  std::size_t search(Colors colors, std::vector<std::uint32_t>& path) {
    colors = refine(std::move(colors));
    const auto count = num_colors(colors);
    if (count == n_) {
      if (++leaves_ > leaf_limit_) {
        throw SizeError("canonical_code: search exceeded " + std::to_string(leaf_limit_) + " leaves");
      }
      std::string code = encode(colors);
      if (!have_best_) {
        first_ = best_ = Leaf{std::move(code), std::move(colors), path};
        have_best_ = true;
        return kNoJump;
      }
      // Cells keep their label ranges under refinement and an individualized
      // vertex takes the first label of its cell, so an equal code maps this
      // leaf's branch onto the reference leaf's branch at their common ancestor.
      if (code == first_.code) {
        add_generator(first_.label, colors);
        return common_prefix(path, first_.path);
      }
      if (code == best_.code) {
        add_generator(best_.label, colors);
        return common_prefix(path, best_.path);
      }
      if (code < best_.code) best_ = Leaf{std::move(code), std::move(colors), path};
      return kNoJump;
    }
    const std::size_t level = path.size();
    std::vector<std::uint32_t> cell_size(count, 0);
    for (auto c : colors) ++cell_size[c];
    std::uint32_t target = 0;
    while (cell_size[target] < 2) ++target;
    std::vector<std::uint32_t> cell;
    for (std::uint32_t v = 0; v < n_; ++v) {
      if (colors[v] == target) cell.push_back(v);
    }
    std::vector<std::uint32_t> explored;
    std::size_t known_generators = 0;
    std::vector<std::uint32_t> orbit;
    for (auto v : branch_representatives(cell)) {
      if (!explored.empty()) {
        if (generators_.size() != known_generators) {
          orbit = orbits(path);
          known_generators = generators_.size();
        }
        if (!orbit.empty() &&
            std::any_of(explored.begin(), explored.end(), [&](auto u) { return orbit[u] == orbit[v]; })) {
          continue;
        }
      }
      std::vector<std::vector<std::uint64_t>> keys(n_);
      for (std::uint32_t u = 0; u < n_; ++u) keys[u] = {colors[u], u == v ? 0u : 1u};
      path.push_back(v);
      const std::size_t jump = search(rank(keys), path);
      path.pop_back();
      explored.push_back(v);
      if (jump < level) return jump;
    }
    return kNoJump;
  }

  std::string encode(const Colors& label) const {
    std::string s;
    put_varint(s, n_);
    std::vector<std::uint32_t> by_label(n_);
    for (std::uint32_t v = 0; v < n_; ++v) by_label[label[v]] = v;
    for (auto v : by_label) put_varint(s, nb_.nodes[v].mark);
    std::vector<std::tuple<std::uint32_t, std::uint32_t, Count>> edges;
    edges.reserve(nb_.edges.size());
    for (const Edge& e : nb_.edges) edges.emplace_back(label[e.source], label[e.target], e.multiplicity);
    std::sort(edges.begin(), edges.end());
    put_varint(s, edges.size());
    for (auto [a, b, m] : edges) {
      put_varint(s, a);
      put_varint(s, b);
      put_varint(s, m);
    }
    return s;
  }

  const MarkedNeighborhood& nb_;
  std::size_t n_;
  std::size_t leaf_limit_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  Leaf first_;
  Leaf best_;
  bool have_best_ = false;
  std::vector<std::vector<std::uint32_t>> generators_;
  std::size_t leaves_ = 0;
};

}  // namespace

std::string CanonicalCode::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

CanonicalCode CanonicalCode::from_hex(std::string_view hex) {
  auto nibble = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    throw InputError("invalid hex digit in canonical code");
  };
  if (hex.size() % 2 != 0) throw InputError("canonical code hex has odd length");
  CanonicalCode code;
  code.bytes.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    code.bytes.push_back(static_cast<char>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  }
  return code;
}

CanonicalCode canonical_code(const MarkedNeighborhood& nbhd, const CanonicalOptions& options) {
  if (nbhd.nodes.size() > options.node_limit) {
    throw SizeError("canonical_code: neighborhood has " + std::to_string(nbhd.nodes.size()) +
                    " nodes, limit is " + std::to_string(options.node_limit));
  }
  if (nbhd.nodes.empty()) throw UsageError("canonical_code: empty neighborhood");
  if (is_in_tree(nbhd)) return tree_code(nbhd);
  return GeneralCanonizer(nbhd, options.leaf_limit).run();
}

LocalDistance local_distance(const MarkedNeighborhood& a, const MarkedNeighborhood& b,
                             const CanonicalOptions& options) {
  const std::uint32_t depth = std::min(a.depth, b.depth);
  for (std::uint32_t k = 1; k <= depth; ++k) {
    if (canonical_code(truncate(a, k), options) != canonical_code(truncate(b, k), options)) {
      return LocalDistance{k};
    }
  }
  // A depth-0 comparison is still meaningful when neither side was explored further.
  if (depth == 0 && canonical_code(truncate(a, 0), options) != canonical_code(truncate(b, 0), options)) {
    return LocalDistance{1};
  }
  return LocalDistance{};
}

}  // namespace lwpr
