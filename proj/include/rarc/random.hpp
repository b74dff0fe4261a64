#pragma once

#include <cstdint>
#include <random>

namespace rarc {

/// Seeded random stream used for every random draw in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so uniform, normal and bounded-integer variates
/// are produced here from raw engine output. Together this makes every draw
/// bit-reproducible across compilers and platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal via the Box-Muller transform. The second variate of
  /// each pair is cached.
  double normal();

  /// Uniform integer on [0, n). Unbiased (rejection sampling); n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the stream with the given index under a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace rarc
