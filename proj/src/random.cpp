#include "modekit/random.hpp"

#include <cmath>
#include <numbers>

namespace modekit {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t replication) {
  std::uint64_t s = master_seed;
  std::uint64_t k = splitmix64(s) ^ cell;
  k = splitmix64(k) ^ replication;
  return splitmix64(k);
}

double RandomStream::uniform_open_closed() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open_closed();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

} // namespace modekit
