#include "lwpr/census.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lwpr/error.hpp"
#include "lwpr/neighborhood.hpp"
#include "lwpr/parallel.hpp"

namespace lwpr {

namespace {

constexpr std::size_t kRootBlock = 512;

using Tally = std::map<CanonicalCode, std::uint64_t>;

void merge_into(Tally& into, const Tally& from) {
  for (const auto& [code, count] : from) into[code] += count;
}

}  // namespace

double NeighborhoodCensus::frequency(const CanonicalCode& code) const {
  auto it = classes.find(code);
  return it == classes.end() || total == 0 ? 0.0 : static_cast<double>(it->second) / total;
}

std::pair<CanonicalCode, std::uint64_t> NeighborhoodCensus::mode() const {
  std::pair<CanonicalCode, std::uint64_t> best{{}, 0};
  for (const auto& [code, count] : classes) {
    if (count > best.second) best = {code, count};
  }
  return best;
}

NeighborhoodCensus census(const DirectedMultigraph& g, std::uint32_t k, const CensusMode& mode,
                          const RngStream& rng, unsigned threads, const CanonicalOptions& options) {
  const std::size_t n = g.num_vertices();
  std::vector<Vertex> roots;
  if (mode.sampled) {
    if (mode.count > n) {
      throw UsageError("census: cannot sample " + std::to_string(mode.count) + " distinct roots from " +
                       std::to_string(n) + " vertices");
    }
    RngStream r = rng;
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), 0u);
    for (std::size_t j = 0; j < mode.count; ++j) std::swap(all[j], all[j + r.below(n - j)]);
    roots.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(mode.count));
  } else {
    roots.resize(n);
    std::iota(roots.begin(), roots.end(), 0u);
  }

  const std::size_t blocks = (roots.size() + kRootBlock - 1) / kRootBlock;
  std::vector<Tally> partial(blocks);
  parallel_blocks(roots.size(), kRootBlock, threads, [&](std::size_t begin, std::size_t end, std::size_t b) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        ++partial[b][canonical_code(explore_neighborhood(g, roots[i], k), options)];
      } catch (const SizeError& e) {
        throw SizeError(std::string(e.what()) + " (root " + std::to_string(roots[i]) + ")");
      }
    }
  });
  NeighborhoodCensus out;
  out.depth = k;
  out.total = roots.size();
  for (const auto& t : partial) merge_into(out.classes, t);
  return out;
}

NeighborhoodCensus census_limit(const TreeSampler& sampler, std::uint32_t k, std::size_t M,
                                const RngStream& rng, unsigned threads, const CanonicalOptions& options) {
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (M + kBlock - 1) / kBlock;
  std::vector<Tally> partial(blocks);
  parallel_blocks(M, kBlock, threads, [&](std::size_t begin, std::size_t end, std::size_t b) {
    RngStream local = rng.derive(b);
    LimitTree tree;
    for (std::size_t i = begin; i < end; ++i) {
      sampler(local, tree);
      ++partial[b][canonical_code(to_neighborhood(tree, k), options)];
    }
  });
  NeighborhoodCensus out;
  out.depth = k;
  out.total = M;
  for (const auto& t : partial) merge_into(out.classes, t);
  return out;
}

double tv_distance(const NeighborhoodCensus& a, const NeighborhoodCensus& b) {
  if (a.depth != b.depth) {
    throw UsageError("tv_distance: census depths differ (" + std::to_string(a.depth) + " vs " +
                     std::to_string(b.depth) + ")");
  }
  if (a.total == 0 || b.total == 0) throw UsageError("tv_distance: empty census");
  const double na = static_cast<double>(a.total), nb = static_cast<double>(b.total);
  double sum = 0.0;
  auto ia = a.classes.begin();
  auto ib = b.classes.begin();
  while (ia != a.classes.end() || ib != b.classes.end()) {
    if (ib == b.classes.end() || (ia != a.classes.end() && ia->first < ib->first)) {
      sum += ia->second / na;
      ++ia;
    } else if (ia == a.classes.end() || ib->first < ia->first) {
      sum += ib->second / nb;
      ++ib;
    } else {
      sum += std::abs(ia->second / na - ib->second / nb);
      ++ia;
      ++ib;
    }
  }
  return std::min(1.0, 0.5 * sum);
}

void write_census_csv(std::ostream& out, const NeighborhoodCensus& c) {
  out << "code_hex,count\n";
  for (const auto& [code, count] : c.classes) out << code.hex() << ',' << count << '\n';
}

NeighborhoodCensus read_census_csv(std::istream& in, std::uint32_t depth, const std::string& name) {
  NeighborhoodCensus c;
  c.depth = depth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "code_hex,count") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InputError(name + ":" + std::to_string(line_no) + ": expected `code_hex,count`");
    }
    try {
      const auto count = std::stoull(line.substr(comma + 1));
      c.classes[CanonicalCode::from_hex(line.substr(0, comma))] += count;
      c.total += count;
    } catch (const std::exception&) {
      throw InputError(name + ":" + std::to_string(line_no) + ": malformed census row");
    }
  }
  return c;
}

}  // namespace lwpr
