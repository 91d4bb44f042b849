#pragma once

#include <cstdint>

namespace fleetflow {

// Deterministic splitmix64 generator. Self-contained so that streams are
// reproducible across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (no cached spare; call order defines the
  // stream exactly).
  double normal();

  // Uniform integer on [0, n). n must be positive.
  int uniform_int(int n);
  std::size_t uniform_index(std::size_t n);

  // Derives an independent child stream. Depends on the parent's current
  // state, so fork order is part of the stream definition.
  Rng fork(std::uint64_t stream);

 private:
  std::uint64_t state_;
};

// Stateless mix of two seeds, used to derive per-component seeds from a
// master seed without sharing generator state.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace fleetflow
