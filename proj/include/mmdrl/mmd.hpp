#pragma once

#include <vector>

#include "mmdrl/kernels.hpp"
#include "mmdrl/measures.hpp"
#include "mmdrl/return_table.hpp"

namespace mmdrl {

// Slack below zero tolerated on a squared MMD before it is treated as a bug.
inline constexpr double kMmdNegativeSlack = 1e-10;

/// A squared MMD together with the rule for taking its square root.
struct MmdValue {
  double squared = 0.0;
  // Magnitude of the kernel sums that produced `squared`; rounding error
  // scales with it.
  double scale = 0.0;

  // sqrt(max(squared, 0)); squared values below the rounding slack raise
  // ConsistencyError.
  double distance() const;
};

/// Squared MMD between two weighted discrete measures:
///   E k(Z, Z') + E k(W, W') - 2 E k(Z, W).
MmdValue mmd_value(const DiscreteMeasure& p, const DiscreteMeasure& q, const Kernel& k);

inline double mmd_squared(const DiscreteMeasure& p, const DiscreteMeasure& q, const Kernel& k) {
  return mmd_value(p, q, k).squared;
}

inline double mmd(const DiscreteMeasure& p, const DiscreteMeasure& q, const Kernel& k) {
  return mmd_value(p, q, k).distance();
}

/// Biased (V-statistic) estimator between two equally weighted particle sets.
double mmd_b_squared(const ParticleSet& z, const ParticleSet& w, const Kernel& k);

/// Gradient of mmd_b_squared(z, targets) with respect to each z_i, holding
/// the targets fixed:
///   (2/N^2) sum_j dk(z_i, z_j) - (2/(N M)) sum_j dk(z_i, t_j).
std::vector<double> mmd_b_grad(const ParticleSet& z, const ParticleSet& targets, const Kernel& k);

/// Supremum MMD over all (state, action) entries.
double mmd_sup(const ReturnTable& mu, const ReturnTable& nu, const Kernel& k);

/// Truncated moment expansion of the Gaussian-kernel MMD^2 with
/// k(x, y) = exp(-(x - y)^2 / (2 sigma^2)):
///   sum_{n=0}^{max_order} (m_n(p) - m_n(q))^2 / (sigma^{2n} n!),
/// where m_n(p) = E_p[exp(-x^2 / (2 sigma^2)) x^n].
double gaussian_moment_series(const DiscreteMeasure& p, const DiscreteMeasure& q, double sigma,
                              int max_order);

}  // namespace mmdrl
