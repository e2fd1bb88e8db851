#include <gtest/gtest.h>

#include <cmath>

#include "mmdrl/errors.hpp"
#include "mmdrl/herding.hpp"
#include "mmdrl/mmd.hpp"

using namespace mmdrl;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

}  // namespace

TEST(Descent, PointMassTarget) {
  auto rng = make_rng({1});
  for (int n : {1, 3, 8}) {
    const auto r = optimize_particles(DiscreteMeasure::dirac(0.0), n, Kernel::gaussian(1.0), {}, rng);
    EXPECT_LT(r.mmd, 1e-6);
    for (double x : r.particles.particles()) EXPECT_NEAR(x, 0.0, 1e-6);
  }
}

TEST(Descent, TwoAtomTargetIsRepresentedExactly) {
  auto rng = make_rng({2});
  const DiscreteMeasure target({0.0, 1.0}, {0.5, 0.5});
  const auto r = optimize_particles(target, 2, Kernel::gaussian(1.0), {}, rng);
  EXPECT_LT(r.mmd, 1e-6);
  const double lo = std::min(r.particles[0], r.particles[1]);
  const double hi = std::max(r.particles[0], r.particles[1]);
  EXPECT_NEAR(lo, 0.0, 1e-5);
  EXPECT_NEAR(hi, 1.0, 1e-5);
}

TEST(Descent, NeverIncreasesObjective) {
  const auto target = discretized_gaussian(50);
  const auto k = Kernel::gaussian(1.0);
  const std::vector<double> start = {-2.0, -0.1, 0.0, 0.3, 2.5};
  const double before = mmd(ParticleSet(start).measure(), target, k);
  for (int steps : {0, 1, 5, 50, 500}) {
    DescentOptions opts;
    opts.max_steps = steps;
    EXPECT_LE(descend_from(target, start, k, opts).mmd, before + 1e-15);
  }
}

TEST(Descent, SweepIsMonotone) {
  auto rng = make_rng({3});
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> atoms(10);
  for (double& a : atoms) a = u(rng);
  const auto target = DiscreteMeasure::uniform(atoms);
  DescentOptions opts;
  opts.max_steps = 500;
  const auto results = optimize_particles_sweep(target, {2, 4, 8, 16, 32, 64, 128}, Kernel::gaussian(1.0), opts, rng);
  for (std::size_t i = 1; i < results.size(); ++i) EXPECT_LE(results[i].mmd, results[i - 1].mmd + 1e-8);
}

TEST(Descent, RejectsBadInput) {
  auto rng = make_rng({4});
  EXPECT_THROW(optimize_particles(DiscreteMeasure::dirac(0.0), 0, Kernel::gaussian(1.0), {}, rng), DomainError);
  DescentOptions bad;
  bad.restarts = 0;
  EXPECT_THROW(optimize_particles(DiscreteMeasure::dirac(0.0), 2, Kernel::gaussian(1.0), bad, rng), DomainError);
}

TEST(Greedy, PointMassTarget) {
  const auto r = greedy_herd(DiscreteMeasure::dirac(0.0), 5, Kernel::gaussian(1.0), grid(-1, 1, 21));
  for (double x : r.particles.particles()) EXPECT_DOUBLE_EQ(x, 0.0);
}

TEST(Greedy, FirstPickMaximisesEmbedding) {
  const DiscreteMeasure target({-1.0, 0.3, 2.0}, {0.2, 0.5, 0.3});
  const auto k = Kernel::gaussian(0.5);
  const auto g = grid(-3, 3, 601);
  double best = -1.0, arg = 0.0;
  for (double c : g) {
    double e = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) e += target.weights()[i] * k(target.atoms()[i], c);
    if (e > best) {
      best = e;
      arg = c;
    }
  }
  EXPECT_DOUBLE_EQ(greedy_herd(target, 1, k, g).particles[0], arg);
}

TEST(Greedy, SymmetricTwoAtomTarget) {
  const DiscreteMeasure target({-1.0, 1.0}, {0.5, 0.5});
  const auto r = greedy_herd(target, 2, Kernel::gaussian(0.5), grid(-2, 2, 401));
  const double lo = std::min(r.particles[0], r.particles[1]);
  const double hi = std::max(r.particles[0], r.particles[1]);
  EXPECT_LT(lo, 0.0);
  EXPECT_GT(hi, 0.0);
  EXPECT_NEAR(lo, -hi, 1e-9);
}

TEST(Herding, MmdBoundsTestFunctions) {
  const auto target = discretized_gaussian(100);
  const auto k = Kernel::gaussian(1.0);
  auto rng = make_rng({5});
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto approx = greedy_herd(target, 7, k, grid(-3, 3, 301));
  const auto pn = approx.particles.measure();
  for (int i = 0; i < 200; ++i) {
    const double z = u(rng);
    auto f = [&](const DiscreteMeasure& m) {
      double e = 0.0;
      for (std::size_t j = 0; j < m.size(); ++j) e += m.weights()[j] * k(z, m.atoms()[j]);
      return e / std::sqrt(k(z, z));
    };
    EXPECT_LE(std::abs(f(pn) - f(target)), approx.mmd + 1e-10);
  }
}

TEST(RateFit, RecoversKnownSlope) {
  const std::vector<int> ns = {4, 8, 16, 32};
  std::vector<double> m;
  for (int n : ns) m.push_back(3.0 / std::sqrt(n));
  const auto fit = fit_rate(ns, m);
  EXPECT_NEAR(fit.slope, -0.5, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-12);
}

TEST(RateFit, ExactRepresentationIsRejected) {
  // Every tested n can hold the two-atom target exactly.
  const DiscreteMeasure target({0.0, 1.0}, {0.5, 0.5});
  RateExperimentOptions opts;
  opts.grid = {0.0, 0.5, 1.0};
  const auto k = Kernel::gaussian(0.1);
  EXPECT_LT(greedy_herd(target, 4, k, opts.grid).mmd, 1e-6);
  EXPECT_THROW(rate_experiment(target, {4, 8, 16, 32}, k, HerdingMethod::kGreedy, opts), DomainError);
  EXPECT_THROW(rate_experiment(target, {4, 8, 16}, k, HerdingMethod::kGreedy, opts),
               DomainError);
}

TEST(DiscretizedGaussian, MidpointQuantiles) {
  const auto m = discretized_gaussian(4);
  EXPECT_NEAR(m.atoms()[0], -1.1503493803760079, 1e-12);
  EXPECT_NEAR(m.atoms()[1], -0.31863936396437514, 1e-12);
  EXPECT_NEAR(m.mean(), 0.0, 1e-15);
}
