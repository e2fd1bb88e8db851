#include "mmdrl/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmdrl/errors.hpp"

namespace mmdrl {
namespace {

// sum_ij wa_i wb_j k(a_i, b_j)
double weighted_kernel_sum(std::span<const double> a, std::span<const double> wa,
                           std::span<const double> b, std::span<const double> wb,
                           const Kernel& k) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) row += wb[j] * k(a[i], b[j]);
    total += wa[i] * row;
  }
  return total;
}

}  // namespace

double MmdValue::distance() const {
  if (squared >= 0.0) return std::sqrt(squared);
  if (squared >= -(kMmdNegativeSlack + 1e-12 * scale)) return 0.0;
  throw ConsistencyError("squared MMD " + std::to_string(squared) +
                         " is negative beyond rounding slack");
}

MmdValue mmd_value(const DiscreteMeasure& p, const DiscreteMeasure& q, const Kernel& k) {
  const double pp = weighted_kernel_sum(p.atoms(), p.weights(), p.atoms(), p.weights(), k);
  const double qq = weighted_kernel_sum(q.atoms(), q.weights(), q.atoms(), q.weights(), k);
  const double pq = weighted_kernel_sum(p.atoms(), p.weights(), q.atoms(), q.weights(), k);
  return MmdValue{pp + qq - 2.0 * pq, std::abs(pp) + std::abs(qq) + 2.0 * std::abs(pq)};
}

double mmd_b_squared(const ParticleSet& z, const ParticleSet& w, const Kernel& k) {
  return mmd_squared(z.measure(), w.measure(), k);
}

std::vector<double> mmd_b_grad(const ParticleSet& z, const ParticleSet& targets, const Kernel& k) {
  const auto zs = z.particles();
  const auto ts = targets.particles();
  const double n = static_cast<double>(zs.size());
  const double m = static_cast<double>(ts.size());
  std::vector<double> grad(zs.size(), 0.0);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    double repulsive = 0.0;
    for (double zj : zs) repulsive += k.grad_x(zs[i], zj);
    double attractive = 0.0;
    for (double tj : ts) attractive += k.grad_x(zs[i], tj);
    grad[i] = 2.0 / (n * n) * repulsive - 2.0 / (n * m) * attractive;
  }
  return grad;
}

double mmd_sup(const ReturnTable& mu, const ReturnTable& nu, const Kernel& k) {
  if (!mu.same_shape(nu)) throw DomainError("supremum MMD over tables of different shapes");
  double sup = 0.0;
  for (std::size_t i = 0; i < mu.entries().size(); ++i) {
    sup = std::max(sup, mmd(mu.entries()[i], nu.entries()[i], k));
  }
  return sup;
}

double gaussian_moment_series(const DiscreteMeasure& p, const DiscreteMeasure& q, double sigma,
                              int max_order) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (max_order < 0) throw DomainError("series order must be nonnegative");
  const double two_sigma_sq = 2.0 * sigma * sigma;
  auto damped_moment = [&](const DiscreteMeasure& m, int n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double x = m.atoms()[i];
      sum += m.weights()[i] * std::exp(-x * x / two_sigma_sq) * std::pow(x, n);
    }
    return sum;
  };
  double total = 0.0;
  double coefficient = 1.0;  // 1 / (sigma^{2n} n!)
  for (int n = 0; n <= max_order; ++n) {
    if (n > 0) coefficient /= sigma * sigma * n;
    const double diff = damped_moment(p, n) - damped_moment(q, n);
    total += coefficient * diff * diff;
  }
  return total;
}

}  // namespace mmdrl
