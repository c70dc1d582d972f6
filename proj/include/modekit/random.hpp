#pragma once

#include <cstdint>
#include <random>

namespace modekit {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed for the stream of replication `replication` in campaign cell `cell`,
// a pure function of its arguments.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t replication);

// One reproducible random stream.
//
// Uniforms come from std::mt19937_64 (its output sequence is fixed by the
// standard). Normals use the basic Box-Muller transform on pairs of
// uniforms u1 = (k1 + 1) 2^-53 in (0, 1], u2 = k2 2^-53 in [0, 1), where
// k = (next() >> 11):
//   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2),
// emitted in the order z0, z1.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform_open_closed(); // (0, 1]
  double uniform();             // [0, 1)
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace modekit
