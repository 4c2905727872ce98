#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>

#include "lwpr/canonical.hpp"
#include "lwpr/graph.hpp"
#include "lwpr/limit_tree.hpp"
#include "lwpr/rng.hpp"

namespace lwpr {

struct NeighborhoodCensus {
  std::uint32_t depth = 0;
  std::map<CanonicalCode, std::uint64_t> classes;
  std::uint64_t total = 0;

  double frequency(const CanonicalCode& code) const;
  // Most frequent class (first in code order on ties).
  std::pair<CanonicalCode, std::uint64_t> mode() const;
};

struct CensusMode {
  bool sampled = false;
  std::size_t count = 0;

  static CensusMode full() { return {}; }
  static CensusMode sample(std::size_t count) { return {true, count}; }
};

// Depth-k classes of every root (full) or of `count` distinct uniform roots.
// Marks are the out-degrees. A SizeError names the root that caused it.
NeighborhoodCensus census(const DirectedMultigraph& g, std::uint32_t k, const CensusMode& mode,
                          const RngStream& rng, unsigned threads = 1, const CanonicalOptions& options = {});

using TreeSampler = std::function<void(RngStream&, LimitTree&)>;

// Tallies the depth-k root classes of M sampled limit trees.
NeighborhoodCensus census_limit(const TreeSampler& sampler, std::uint32_t k, std::size_t M,
                                const RngStream& rng, unsigned threads = 1,
                                const CanonicalOptions& options = {});

// Half the L1 distance between class frequencies. Depths must agree.
double tv_distance(const NeighborhoodCensus& a, const NeighborhoodCensus& b);

// CSV `code_hex,count`, classes in code order.
void write_census_csv(std::ostream& out, const NeighborhoodCensus& c);
NeighborhoodCensus read_census_csv(std::istream& in, std::uint32_t depth, const std::string& name = "<stream>");

}  // namespace lwpr
