#include "emc/random.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace emc {
namespace {

const BigInt kTwo64 = BigInt(1) << 64;

}  // namespace

std::uint64_t path_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ExactCategorical::ExactCategorical(std::vector<Rational> probs) {
  if (probs.empty()) throw std::invalid_argument("empty categorical");
  Rational total = 0;
  for (const auto& p : probs) {
    if (p < 0) throw std::invalid_argument("negative categorical weight");
    total += p;
  }
  if (total == 0) throw std::invalid_argument("categorical weights sum to zero");

  cum_.reserve(probs.size());
  floor_.reserve(probs.size());
  ceil_.reserve(probs.size());
  Rational run = 0;
  for (auto& p : probs) {
    run += p;
    Rational t = run / total;
    cum_.push_back(t);
    BigInt scaled = numerator(t) * kTwo64;
    BigInt q = scaled / denominator(t);
    bool exact = scaled % denominator(t) == 0;
    std::uint64_t fl;
    if (q >= kTwo64) {
      // t == 1: force the boundary into the refinement path.
      fl = std::numeric_limits<std::uint64_t>::max();
      exact = false;
    } else {
      fl = q.convert_to<std::uint64_t>();
    }
    floor_.push_back(fl);
    ceil_.push_back(exact ? fl : fl + 1);
  }
}

int ExactCategorical::sample(BitStream& bits) const {
  const std::uint64_t u = bits.next_u64();
  const std::size_t m = cum_.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (u < floor_[i]) return static_cast<int>(i);
    if (u >= ceil_[i]) continue;
    return refine(bits, u);
  }
  return static_cast<int>(m - 1);
}

int ExactCategorical::refine(BitStream& bits, std::uint64_t first) const {
  // U is known to lie in [p, p + s); narrow until every boundary is decided.
  Rational p = Rational(BigInt(first), kTwo64);
  Rational s = Rational(BigInt(1), kTwo64);
  const std::size_t m = cum_.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const Rational& t = cum_[i];
    while (true) {
      if (p + s <= t) return static_cast<int>(i);
      if (p >= t) break;
      s /= kTwo64;
      p += Rational(BigInt(bits.next_u64())) * s;
    }
  }
  return static_cast<int>(m - 1);
}

}  // namespace emc
