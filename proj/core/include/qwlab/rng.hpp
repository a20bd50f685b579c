#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qwlab {

// Seeded RNG for trajectory sampling. Doubles are produced from raw engine
// output (53-bit mantissa fill) instead of std::uniform_real_distribution so
// that a given seed yields byte-identical streams across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Index drawn proportionally to non-negative weights. Weights need not be
  // normalized; all-zero weight vectors are a caller bug.
  std::size_t pick(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    if (total <= 0) throw std::runtime_error("pick: no positive weight");
    double r = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      r -= weights[i];
      if (r < 0) return i;
    }
    return weights.size() - 1;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace qwlab
