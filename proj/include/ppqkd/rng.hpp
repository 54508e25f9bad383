// Deterministic random source for all sampling in the toolkit: a seeded
// mt19937_64 with an explicit 53-bit mantissa mapping to [0,1). The mapping is
// fixed here (rather than through std::uniform_real_distribution) so that a
// given seed reproduces bit-identical streams across standard libraries.

#pragma once

#include <cstdint>
#include <random>

namespace ppqkd {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0,1) with 53 significant bits.
  double next_double() {
      return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // true with probability p
  bool bernoulli(double p) { return next_double() < p; }

  // index k with probability weights[k] / sum(weights); weights must be
  // nonnegative and sum to something positive.
  template <typename Container>
  int pick(const Container& weights) {
      double total = 0.0;
      for (double w : weights) total += w;
      double u = next_double() * total;
      int k = 0;
      const int last = static_cast<int>(weights.size()) - 1;
      for (double w : weights) {
          if (u < w || k == last) return k;
          u -= w;
          ++k;
      }
      return last;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ppqkd
