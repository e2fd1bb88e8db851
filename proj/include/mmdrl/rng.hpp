#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace mmdrl {

// The single random engine used across the library. Every experiment
// derives its streams from explicit integer seeds.
using Rng = std::mt19937_64;

// Independent stream for a tuple of integer keys (seed, cell ids, ...).
inline Rng make_rng(std::initializer_list<std::uint64_t> keys) {
  std::seed_seq seq(keys.begin(), keys.end());
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Index i drawn with probability probs[i]; probs must sum to one.
inline std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  // Rounding can leave the cumulative sum just short of one.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return i;
  }
  return 0;
}

}  // namespace mmdrl
