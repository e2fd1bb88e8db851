#pragma once

// Random measures and tables shared by the certification suites.

#include <vector>

#include "mmdrl/measures.hpp"
#include "mmdrl/return_table.hpp"
#include "mmdrl/rng.hpp"

namespace mmdrl::detail {

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) total += (x = uniform01(rng) + 0.05);
  for (double& x : w) x /= total;
  return w;
}

// 1..max_atoms atoms uniform in [lo, hi] with random positive weights.
inline DiscreteMeasure random_measure(Rng& rng, int max_atoms, double lo, double hi) {
  const auto n = static_cast<std::size_t>(1 + rng() % static_cast<unsigned>(max_atoms));
  std::vector<double> atoms(n);
  for (double& a : atoms) a = uniform(rng, lo, hi);
  return DiscreteMeasure(std::move(atoms), random_simplex(n, rng));
}

inline ReturnTable random_table(int states, int actions, Rng& rng, int max_atoms, double lo,
                                double hi) {
  std::vector<DiscreteMeasure> entries;
  for (int i = 0; i < states * actions; ++i) entries.push_back(random_measure(rng, max_atoms, lo, hi));
  return ReturnTable(states, actions, std::move(entries));
}

}  // namespace mmdrl::detail
