#pragma once

#include "emc/numeric.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace emc {

// Deterministic uniform 64-bit stream. mt19937_64 is pinned by the standard,
// so identical seeds give identical streams on every platform.
class BitStream {
 public:
  explicit BitStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Seed for the i-th parallel stream derived from a master seed:
// splitmix64 finalizer applied to master + (i+1) * golden gamma.
std::uint64_t path_seed(std::uint64_t master, std::uint64_t index);

// Samples an index with probability exactly probs[i] / sum(probs).
// The uniform variate is consumed as 64-bit chunks; the first chunk decides
// except on cell boundaries, where further chunks refine the comparison
// until it is exact.
class ExactCategorical {
 public:
  explicit ExactCategorical(std::vector<Rational> probs);

  int sample(BitStream& bits) const;

  std::size_t size() const { return cum_.size(); }

 private:
  std::vector<Rational> cum_;           // strictly increasing, last == total
  std::vector<std::uint64_t> floor_;    // floor(cum/total * 2^64), capped
  std::vector<std::uint64_t> ceil_;     // ceil(cum/total * 2^64), capped
  int refine(BitStream& bits, std::uint64_t first) const;
};

}  // namespace emc
