#include "lwpr/rng.hpp"

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <cmath>

namespace lwpr {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(splitmix64(master_seed ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL))) {}

RngStream RngStream::derive(std::uint64_t child) const {
  return RngStream(master_seed_, splitmix64(stream_id_ * 0xd1342543de82ef95ULL + child + 1));
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  // Lemire's multiply-and-reject.
  u128 m = static_cast<u128>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<u128>(engine_()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::exponential(double rate) {
  return -std::log(uniform_positive()) / rate;
}

double RngStream::gamma(double shape) {
  boost::random::gamma_distribution<double> dist(shape, 1.0);
  return dist(*this);
}

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  boost::random::poisson_distribution<std::uint64_t, double> dist(mean);
  return dist(*this);
}

}  // namespace lwpr
