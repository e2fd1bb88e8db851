#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mmdrl/bellman.hpp"
#include "mmdrl/errors.hpp"
#include "mmdrl/experiments.hpp"
#include "mmdrl/mmd.hpp"
#include "mmdrl/parallel.hpp"
#include "random_instances.hpp"

namespace mmdrl::experiments {
namespace {

using detail::random_measure;
using detail::random_simplex;
using detail::uniform;

enum class Family { kGaussian, kGaussianMixture, kUnrectified, kUnrectifiedMixture, kExpProd };

const char* family_name(Family f) {
  switch (f) {
    case Family::kGaussian: return "gaussian";
    case Family::kGaussianMixture: return "gaussian_mix";
    case Family::kUnrectified: return "unrectified";
    case Family::kUnrectifiedMixture: return "unrectified_mix";
    case Family::kExpProd: return "expprod";
  }
  return "?";
}

constexpr Family kAllFamilies[] = {Family::kGaussian, Family::kGaussianMixture, Family::kUnrectified,
                                   Family::kUnrectifiedMixture, Family::kExpProd};

Kernel random_kernel(Family f, Rng& rng) {
  switch (f) {
    case Family::kGaussian: return Kernel::gaussian(uniform(rng, 0.2, 5.0));
    case Family::kGaussianMixture:
      return Kernel::gaussian_mixture(
          {uniform(rng, 0.2, 5.0), uniform(rng, 0.2, 5.0), uniform(rng, 0.2, 5.0)});
    case Family::kUnrectified: return Kernel::unrectified(uniform(rng, 0.05, 1.95));
    case Family::kUnrectifiedMixture: {
      std::vector<double> alphas = {uniform(rng, 0.05, 1.95), uniform(rng, 0.05, 1.95)};
      return Kernel::unrectified_mixture(std::move(alphas), random_simplex(2, rng));
    }
    case Family::kExpProd: return Kernel::exp_prod(uniform(rng, 0.5, 2.0));
  }
  throw DomainError("unknown kernel family");
}

// Exp-prod values grow like exp(x^2/sigma^2); keep its supports in [-1, 1].
DiscreteMeasure measure_for(Family f, Rng& rng, int max_atoms = 6) {
  return f == Family::kExpProd ? random_measure(rng, max_atoms, -1.0, 1.0)
                               : random_measure(rng, max_atoms, -2.0, 2.0);
}

struct Tally {
  PropertyResult result;

  Tally(std::string property, std::string kernel, double tolerance) {
    result.property = std::move(property);
    result.kernel = std::move(kernel);
    result.tolerance = tolerance;
  }

  // An error statistic that must stay at or below the tolerance.
  void error(double e) {
    ++result.instances;
    if (!(e <= result.tolerance)) ++result.violations;
    result.worst = std::isnan(e) ? e : std::max(result.worst, e);
  }

  // A statistic that must stay strictly above the tolerance.
  void positive(double v) {
    if (result.instances == 0 || v < result.worst) result.worst = v;
    ++result.instances;
    if (!(v > result.tolerance)) ++result.violations;
  }
};

// Same multiset as p, stored differently: shuffled and with one atom split in two.
DiscreteMeasure relabel(const DiscreteMeasure& p, Rng& rng) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<double> atoms, weights;
  for (auto i : order) {
    atoms.push_back(p.atoms()[i]);
    weights.push_back(p.weights()[i]);
  }
  atoms.push_back(atoms.front());
  weights.front() *= 0.5;
  weights.push_back(weights.front());
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

// ------------------------------------------------------------- mmd properties

PropertyResult symmetry(Family f, int n, Rng& rng) {
  Tally t("symmetry", family_name(f), 1e-12);
  for (int i = 0; i < n; ++i) {
    const auto k = random_kernel(f, rng);
    const auto p = measure_for(f, rng);
    const auto q = measure_for(f, rng);
    t.error(std::abs(mmd_squared(p, q, k) - mmd_squared(q, p, k)));
  }
  return t.result;
}

PropertyResult indiscernibles(Family f, int n, Rng& rng) {
  Tally t("indiscernibles", family_name(f), 1e-10);
  for (int i = 0; i < n; ++i) {
    const auto k = random_kernel(f, rng);
    const auto p = measure_for(f, rng);
    t.error(std::abs(mmd_squared(p, relabel(p, rng), k)));
  }
  return t.result;
}

PropertyResult triangle(Family f, int n, Rng& rng) {
  Tally t("triangle", family_name(f), 1e-10);
  for (int i = 0; i < n; ++i) {
    const auto k = random_kernel(f, rng);
    const auto p = measure_for(f, rng);
    const auto q = measure_for(f, rng);
    const auto r = measure_for(f, rng);
    t.error(mmd(p, r, k) - mmd(p, q, k) - mmd(q, r, k));
  }
  return t.result;
}

// Distinct measures must be separated. For the unrectified kernel the pairs
// have distinct means or variances.
PropertyResult separation(Family f, int n, Rng& rng) {
  Tally t("separation", family_name(f), f == Family::kUnrectified ? 1e-8 : 0.0);
  for (int i = 0; i < n; ++i) {
    const auto k = random_kernel(f, rng);
    const auto p = measure_for(f, rng);
    auto q = measure_for(f, rng);
    if (p.size() == 1 && q.size() == 1) q = measure_for(f, rng, 6);
    t.positive(mmd(p, q, k));
  }
  return t.result;
}

// alpha = 2: MMD^2 = 2 (m1 - m1')^2, so equal means give zero. Random pairs
// are checked on the squared value (the square root turns 1e-16 rounding into
// 1e-8); the exactly representable instance {-1, 1} vs {0} on the distance.
PropertyResult alpha2_degeneracy(int n, Rng& rng) {
  Tally t("alpha2-degeneracy", "unrectified:alpha=2", 1e-12);
  const auto k = Kernel::unrectified(2.0);
  const std::vector<double> pm = {-1.0, 1.0};
  t.error(mmd(DiscreteMeasure::uniform(pm), DiscreteMeasure::dirac(0.0), k));
  for (int i = 0; i < n; ++i) {
    const auto p = random_measure(rng, 6, -2.0, 2.0);
    auto q = random_measure(rng, 6, -2.0, 2.0);
    // Shift q onto p's mean, leaving its spread alone.
    q = pushforward_affine(q, p.mean() - q.mean(), 1.0);
    t.error(std::abs(mmd_squared(p, q, k)));
  }
  return t.result;
}

PropertyResult alpha2_closed_form(int n, Rng& rng) {
  Tally t("alpha2-closed-form", "unrectified:alpha=2", 1e-10);
  const auto k = Kernel::unrectified(2.0);
  for (int i = 0; i < n; ++i) {
    const auto p = random_measure(rng, 6, -2.0, 2.0);
    const auto q = random_measure(rng, 6, -2.0, 2.0);
    const double d = p.mean() - q.mean();
    t.error(std::abs(mmd_squared(p, q, k) - 2.0 * d * d));
  }
  return t.result;
}

// ------------------------------------------------------------ lemma suite

PropertyResult mixture_contraction(Family f, int n, Rng& rng) {
  Tally t("mixture-contraction", family_name(f), 1e-10);
  for (int i = 0; i < n; ++i) {
    const auto k = random_kernel(f, rng);
    const auto parts = static_cast<std::size_t>(1 + rng() % 4);
    const auto probs = random_simplex(parts, rng);
    std::vector<DiscreteMeasure> mus, nus;
    double bound = 0.0;
    for (std::size_t j = 0; j < parts; ++j) {
      mus.push_back(measure_for(f, rng));
      nus.push_back(measure_for(f, rng));
      bound += probs[j] * mmd_squared(mus.back(), nus.back(), k);
    }
    t.error(mmd_squared(mixture(mus, probs), mixture(nus, probs), k) - bound);
  }
  return t.result;
}

PropertyResult mixture_linearity(Family f, int n, Rng& rng) {
  Tally t("kernel-mixture-linearity", family_name(f), 1e-10);
  for (int i = 0; i < n; ++i) {
    const auto p = measure_for(f, rng);
    const auto q = measure_for(f, rng);
    double whole = 0.0;
    double parts = 0.0;
    if (f == Family::kGaussianMixture) {
      const std::vector<double> hs = {uniform(rng, 0.2, 5.0), uniform(rng, 0.2, 5.0),
                                      uniform(rng, 0.2, 5.0)};
      whole = mmd_squared(p, q, Kernel::gaussian_mixture(hs));
      for (double h : hs) parts += mmd_squared(p, q, Kernel::gaussian(h));
    } else {
      const std::vector<double> alphas = {uniform(rng, 0.05, 2.0), uniform(rng, 0.05, 2.0),
                                          uniform(rng, 0.05, 2.0)};
      std::vector<double> c(3);
      for (double& x : c) x = uniform(rng, 0.0, 2.0);
      whole = mmd_squared(p, q, Kernel::unrectified_mixture(alphas, c));
      for (std::size_t j = 0; j < 3; ++j) parts += c[j] * mmd_squared(p, q, Kernel::unrectified(alphas[j]));
    }
    t.error(std::abs(whole - parts));
  }
  return t.result;
}

// Unrectified: MMD^2 of pushforwards scales by gamma^alpha (relative error).
// Shift-invariant kernels: a pure shift leaves MMD^2 unchanged (absolute error).
PropertyResult affine_scaling(Family f, int n, Rng& rng) {
  const bool scaled = f == Family::kUnrectified;
  Tally t(scaled ? "affine-scaling" : "affine-shift", family_name(f), 1e-10);
  for (int i = 0; i < n; ++i) {
    const auto k = random_kernel(f, rng);
    const auto p = measure_for(f, rng);
    const auto q = measure_for(f, rng);
    const double r = uniform(rng, -2.0, 2.0);
    const double gamma = scaled ? uniform(rng, 0.05, 1.0) : 1.0;
    const double before = mmd_squared(p, q, k);
    const double after = mmd_squared(pushforward_affine(p, r, gamma), pushforward_affine(q, r, gamma), k);
    if (scaled) {
      const double expected = std::pow(gamma, k.min_scale_order()) * before;
      t.error(std::abs(after - expected) / std::max(std::abs(expected), 1e-300));
    } else {
      t.error(std::abs(after - before));
    }
  }
  return t.result;
}

PropertyResult moment_series(int n, Rng& rng) {
  Tally t("moment-series", "gaussian:h=2", 1e-6);
  const auto k = Kernel::gaussian(2.0);
  for (int i = 0; i < n; ++i) {
    const auto p = random_measure(rng, 6, -1.0, 1.0);
    const auto q = random_measure(rng, 6, -1.0, 1.0);
    t.error(std::abs(gaussian_moment_series(p, q, 1.0, 12) - mmd_squared(p, q, k)));
  }
  return t.result;
}

// ---------------------------------------------------------------- gradient

// Particles spread apart so the unrectified kink never sits inside a
// finite-difference stencil.
std::vector<double> spread_points(Rng& rng, int n, double lo, double hi) {
  std::vector<double> x;
  while (static_cast<int>(x.size()) < n) {
    const double c = uniform(rng, lo, hi);
    if (std::all_of(x.begin(), x.end(), [c](double y) { return std::abs(c - y) > 0.05; })) {
      x.push_back(c);
    }
  }
  return x;
}

PropertyResult gradient(Family f, int n, Rng& rng) {
  Tally t("gradient", family_name(f), 1e-5);
  constexpr double kStep = 1e-6;
  const double lo = f == Family::kExpProd ? -1.0 : -2.0;
  const double hi = -lo;
  for (int i = 0; i < n; ++i) {
    Kernel k = random_kernel(f, rng);
    if (f == Family::kUnrectified) k = Kernel::unrectified(uniform(rng, 0.3, 1.95));
    const int nz = 2 + static_cast<int>(rng() % 5);
    const int nw = 2 + static_cast<int>(rng() % 5);
    // z and w share one pool so no particle comes close to a target either.
    auto pool = spread_points(rng, nz + nw, lo, hi);
    const ParticleSet w(std::vector<double>(pool.begin() + nz, pool.end()));
    pool.resize(static_cast<std::size_t>(nz));
    const ParticleSet z(pool);
    const auto g = mmd_b_grad(z, w, k);
    double err = 0.0;
    double norm = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      auto up = pool;
      auto down = pool;
      up[j] += kStep;
      down[j] -= kStep;
      const double fd = (mmd_b_squared(ParticleSet(up), w, k) - mmd_b_squared(ParticleSet(down), w, k)) /
                        (2.0 * kStep);
      err = std::max(err, std::abs(g[j] - fd));
      norm = std::max(norm, std::abs(fd));
    }
    t.error(err / std::max(norm, 1e-8));
  }
  return t.result;
}

// ------------------------------------------------------------------ bellman

PropertyResult fixed_point(int n, Rng& rng) {
  Tally t("bellman-fixed-point", "-", 1e-6);
  for (int i = 0; i < n; ++i) {
    const int length = 2 + static_cast<int>(rng() % 5);
    const auto mdp = build_chain(length);
    const auto policy = Policy::random(length, 2, rng);
    auto table = detail::random_table(length, 2, rng, 4, -5.0, 5.0);
    for (int it = 0; it < 200; ++it) {
      auto next = apply_bellman_exact(mdp, policy, table);
      std::vector<DiscreteMeasure> compact;
      for (const auto& m : next.entries()) compact.push_back(compact_preserving_mean(m, 16));
      table = ReturnTable(length, 2, std::move(compact));
    }
    const auto q = expected_returns(mdp, policy);
    double err = 0.0;
    for (int s = 0; s < length; ++s) {
      for (int a = 0; a < 2; ++a) err = std::max(err, std::abs(table.at(s, a).mean() - q.at(s, a)));
    }
    t.error(err);
  }
  return t.result;
}

// One application on a random 2-state MDP against explicit branch enumeration.
PropertyResult bellman_exactness(int n, Rng& rng) {
  Tally t("bellman-exactness", "gaussian:h=0.1", 1e-12);
  const auto k = Kernel::gaussian(0.1);
  for (int i = 0; i < n; ++i) {
    const double gamma = uniform(rng, 0.0, 0.99);
    std::vector<std::vector<Transition>> rows;
    for (int sa = 0; sa < 4; ++sa) {
      const auto p = random_simplex(2, rng);
      std::vector<Transition> row;
      for (int s2 = 0; s2 < 2; ++s2) row.push_back({s2, p[static_cast<std::size_t>(s2)], random_measure(rng, 3, -1.0, 1.0)});
      rows.push_back(std::move(row));
    }
    const TabularMdp mdp(2, 2, rows, {}, gamma);
    const auto policy = Policy::random(2, 2, rng);
    const auto mu = detail::random_table(2, 2, rng, 4, -3.0, 3.0);
    const auto result = apply_bellman_exact(mdp, policy, mu);
    double err = 0.0;
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) {
        std::vector<double> atoms, weights;
        for (const auto& tr : rows[static_cast<std::size_t>(s * 2 + a)]) {
          for (int b = 0; b < 2; ++b) {
            const auto& next = mu.at(tr.next_state, b);
            for (std::size_t ri = 0; ri < tr.reward.size(); ++ri) {
              for (std::size_t zi = 0; zi < next.size(); ++zi) {
                atoms.push_back(tr.reward.atoms()[ri] + gamma * next.atoms()[zi]);
                weights.push_back(tr.probability * policy.probs(tr.next_state)[static_cast<std::size_t>(b)] *
                                  tr.reward.weights()[ri] * next.weights()[zi]);
              }
            }
          }
        }
        const DiscreteMeasure brute(std::move(atoms), std::move(weights));
        err = std::max(err, std::abs(mmd_squared(result.at(s, a), brute, k)));
      }
    }
    t.error(err);
  }
  return t.result;
}

}  // namespace

PropertyReport run_property_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  const int metric = cfg.metric_instances;
  const int lemma = cfg.lemma_instances;
  const int grad = cfg.gradient_instances;
  std::vector<std::function<PropertyResult(Rng&)>> tasks;
  for (Family f : kAllFamilies) {
    tasks.push_back([=](Rng& rng) { return symmetry(f, metric, rng); });
    tasks.push_back([=](Rng& rng) { return indiscernibles(f, metric, rng); });
    tasks.push_back([=](Rng& rng) { return separation(f, metric, rng); });
    tasks.push_back([=](Rng& rng) { return mixture_contraction(f, lemma, rng); });
    tasks.push_back([=](Rng& rng) { return gradient(f, grad, rng); });
  }
  for (Family f : {Family::kGaussian, Family::kGaussianMixture}) {
    tasks.push_back([=](Rng& rng) { return triangle(f, metric, rng); });
    tasks.push_back([=](Rng& rng) { return affine_scaling(f, lemma, rng); });
  }
  tasks.push_back([=](Rng& rng) { return affine_scaling(Family::kUnrectified, lemma, rng); });
  tasks.push_back([=](Rng& rng) { return mixture_linearity(Family::kGaussianMixture, lemma, rng); });
  tasks.push_back([=](Rng& rng) { return mixture_linearity(Family::kUnrectifiedMixture, lemma, rng); });
  tasks.push_back([=](Rng& rng) { return alpha2_degeneracy(lemma, rng); });
  tasks.push_back([=](Rng& rng) { return alpha2_closed_form(lemma, rng); });
  tasks.push_back([=](Rng& rng) { return moment_series(lemma, rng); });
  tasks.push_back([](Rng& rng) { return fixed_point(20, rng); });
  tasks.push_back([=](Rng& rng) { return bellman_exactness(lemma, rng); });

  const auto seed = cfg.seed_list().front();
  PropertyReport report;
  report.results.resize(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    Rng rng = make_rng({seed, i, 0x70ULL});
    report.results[i] = tasks[i](rng);
  });
  return report;
}

}  // namespace mmdrl::experiments
