#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>

#include "lwpr/neighborhood.hpp"

namespace lwpr {

// Byte string identifying a MarkedNeighborhood up to isomorphism
// (bijection preserving edges with multiplicity, the root, and marks).
struct CanonicalCode {
  std::string bytes;

  std::string hex() const;
  static CanonicalCode from_hex(std::string_view hex);

  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
  friend std::strong_ordering operator<=>(const CanonicalCode& a, const CanonicalCode& b) {
    return a.bytes.compare(b.bytes) <=> 0;
  }
};

struct CanonicalOptions {
  // Neighborhoods with more nodes are rejected with SizeError.
  std::size_t node_limit = 10'000;
  // Cap on search-tree leaves for the general (non-tree) path.
  std::size_t leaf_limit = 1'000'000;
};

// In-trees get a sorted-subtree code; anything else goes through colour
// refinement with exhaustive individualization over the residual cells.
CanonicalCode canonical_code(const MarkedNeighborhood& nbhd, const CanonicalOptions& options = {});

// Local pseudodistance between two explored neighborhoods.
struct LocalDistance {
  // Least k >= 1 at which the depth-k truncations differ; nullopt when all
  // truncations up to the shallower exploration depth agree.
  std::optional<std::uint32_t> kappa;

  double value() const { return kappa ? 1.0 / (1.0 + *kappa) : 0.0; }
};

LocalDistance local_distance(const MarkedNeighborhood& a, const MarkedNeighborhood& b,
                             const CanonicalOptions& options = {});

}  // namespace lwpr
