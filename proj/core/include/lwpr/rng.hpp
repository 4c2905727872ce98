#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace lwpr {

// SplitMix64 finalizer; used to derive engine seeds from (seed, stream) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Reproducible random stream identified by (master seed, stream id).
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard, and every variate below is produced by code in this library (or
// Boost.Random, whose algorithms are fixed), never by the implementation-
// defined std:: distributions. Identical (seed, stream) pairs therefore give
// identical draws on every platform with IEEE doubles.
//
// Streams are split by `derive`, which hashes the child index into a new
// stream id; a derived stream is independent of the draws already taken from
// its parent.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return engine_(); }

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  RngStream derive(std::uint64_t child) const;

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_positive() { return 1.0 - uniform(); }
  // Uniform integer on [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  // Exponential with the given rate, by inversion.
  double exponential(double rate);
  // Gamma(shape, 1) by Marsaglia-Tsang rejection (Boost.Random).
  double gamma(double shape);
  // Poisson(mean): inversion for small means, PTRS rejection otherwise (Boost.Random).
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// Well-known stream ids used by the pipeline.
namespace streams {
inline constexpr std::uint64_t kGraph = 1;
inline constexpr std::uint64_t kLimits = 2;
inline constexpr std::uint64_t kCensus = 3;
inline constexpr std::uint64_t kWeights = 4;
}  // namespace streams

}  // namespace lwpr
