#include <gtest/gtest.h>

#include <cmath>

#include "mmdrl/errors.hpp"
#include "mmdrl/mmd.hpp"
#include "mmdrl/rng.hpp"
#include "oracles.hpp"

using mmdrl::DiscreteMeasure;
using mmdrl::Kernel;
using mmdrl::ParticleSet;

namespace {

DiscreteMeasure random_measure(mmdrl::Rng& rng, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  const int n = 1 + static_cast<int>(rng() % 5);
  std::vector<double> atoms, weights;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    atoms.push_back(u(rng));
    weights.push_back(w(rng));
    total += weights.back();
  }
  for (double& x : weights) x /= total;
  return DiscreteMeasure(atoms, weights);
}

oracle::Weighted as_oracle(const DiscreteMeasure& m) {
  return {{m.atoms().begin(), m.atoms().end()}, {m.weights().begin(), m.weights().end()}};
}

}  // namespace

TEST(MmdSquared, Examples) {
  const auto d0 = DiscreteMeasure::dirac(0.0);
  const auto d1 = DiscreteMeasure::dirac(1.0);
  EXPECT_NEAR(mmdrl::mmd_squared(d0, d1, Kernel::gaussian(1.0)), 1.264241, 1e-6);
  EXPECT_DOUBLE_EQ(mmdrl::mmd_squared(d0, d1, Kernel::gaussian(1.0)), 2.0 - 2.0 * std::exp(-1.0));
  EXPECT_DOUBLE_EQ(mmdrl::mmd_squared(d0, d1, Kernel::unrectified(1.0)), 2.0);
  const DiscreteMeasure pm({-1.0, 1.0}, {0.5, 0.5});
  EXPECT_NEAR(mmdrl::mmd_squared(pm, d0, Kernel::unrectified(2.0)), 0.0, 1e-12);
  EXPECT_NEAR(mmdrl::mmd(pm, d0, Kernel::unrectified(2.0)), 0.0, 1e-12);
  for (const char* spec : {"gaussian:h=1", "unrectified:alpha=1", "expprod:sigma2=1"}) {
    EXPECT_NEAR(mmdrl::mmd_squared(pm, pm, Kernel::parse(spec)), 0.0, 1e-12);
  }
}

TEST(MmdSquared, MatchesLoopOracle) {
  auto rng = mmdrl::make_rng({31});
  const std::vector<std::pair<Kernel, oracle::KernelFn>> kernels = {
      {Kernel::gaussian(0.8), oracle::gaussian(0.8)},
      {Kernel::unrectified(1.3), oracle::unrectified(1.3)},
      {Kernel::exp_prod(1.0), oracle::exp_prod(1.0)}};
  for (int i = 0; i < 50; ++i) {
    const auto p = random_measure(rng, -1.0, 1.0);
    const auto q = random_measure(rng, -1.0, 1.0);
    for (const auto& [k, ok] : kernels) {
      EXPECT_NEAR(mmdrl::mmd_squared(p, q, k), oracle::mmd_squared(as_oracle(p), as_oracle(q), ok), 1e-12);
      EXPECT_NEAR(mmdrl::mmd_squared(p, q, k), mmdrl::mmd_squared(q, p, k), 1e-12);
    }
  }
}

TEST(MmdB, Examples) {
  const ParticleSet half(4, 0.5);
  EXPECT_NEAR(mmdrl::mmd_b_squared(half, half, Kernel::gaussian(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(mmdrl::mmd_b_squared(ParticleSet({0.0}), ParticleSet({1.0}), Kernel::gaussian(1.0)),
              1.264241, 1e-6);
  EXPECT_NEAR(mmdrl::mmd_b_squared(ParticleSet({0.0, 1.0}), ParticleSet({0.0, 1.0}), Kernel::gaussian(2.0)),
              0.0, 1e-12);
}

TEST(MmdBGrad, Examples) {
  const auto g = mmdrl::mmd_b_grad(ParticleSet({0.0}), ParticleSet({1.0}), Kernel::gaussian(1.0));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_NEAR(g[0], -1.471518, 1e-6);
  const ParticleSet z({-0.4, 0.1, 0.9});
  for (double x : mmdrl::mmd_b_grad(z, z, Kernel::gaussian(1.0))) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(MmdBGrad, MatchesFiniteDifferences) {
  auto rng = mmdrl::make_rng({32});
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const char* spec : {"gaussian:h=0.5", "gaussian_mix:h=8,10,12", "unrectified:alpha=1.5",
                           "expprod:sigma2=1"}) {
    const auto k = Kernel::parse(spec);
    for (int i = 0; i < 20; ++i) {
      std::vector<double> z(5), w(4);
      for (double& x : z) x = u(rng);
      for (double& x : w) x = u(rng);
      const ParticleSet target(w);
      const auto g = mmdrl::mmd_b_grad(ParticleSet(z), target, k);
      const auto fd = oracle::numeric_gradient(
          [&](const std::vector<double>& x) { return mmdrl::mmd_b_squared(ParticleSet(x), target, k); }, z);
      double scale = 0.0;
      for (double x : fd) scale = std::max(scale, std::abs(x));
      for (std::size_t j = 0; j < z.size(); ++j) EXPECT_LT(std::abs(g[j] - fd[j]), 1e-5 * scale) << spec;
    }
  }
}

TEST(MmdSup, TakesMaximumEntry) {
  using mmdrl::ReturnTable;
  const auto d0 = DiscreteMeasure::dirac(0.0);
  const auto k = Kernel::unrectified(1.0);
  const ReturnTable single(1, 1, {d0});
  const ReturnTable single_b(1, 1, {DiscreteMeasure::dirac(2.0)});
  EXPECT_DOUBLE_EQ(mmdrl::mmd_sup(single, single_b, k), std::sqrt(4.0));
  EXPECT_DOUBLE_EQ(mmdrl::mmd_sup(single, single, k), 0.0);
  // Entry MMDs sqrt(2) and sqrt(6).
  const ReturnTable mu(1, 2, {d0, d0});
  const ReturnTable nu(1, 2, {DiscreteMeasure::dirac(1.0), DiscreteMeasure::dirac(3.0)});
  EXPECT_DOUBLE_EQ(mmdrl::mmd_sup(mu, nu, k), std::sqrt(6.0));
  EXPECT_THROW(mmdrl::mmd_sup(single, mu, k), mmdrl::DomainError);
}

TEST(MmdValue, ClampsRoundingAndRejectsLargeNegatives) {
  EXPECT_EQ((mmdrl::MmdValue{-5e-11, 1.0}).distance(), 0.0);
  EXPECT_THROW((mmdrl::MmdValue{-1e-6, 1.0}).distance(), mmdrl::ConsistencyError);
  EXPECT_DOUBLE_EQ((mmdrl::MmdValue{4.0, 1.0}).distance(), 2.0);
}

TEST(MomentSeries, MatchesClosedFormOnUnitInterval) {
  auto rng = mmdrl::make_rng({33});
  const auto k = Kernel::gaussian(2.0);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_measure(rng, -1.0, 1.0);
    const auto q = random_measure(rng, -1.0, 1.0);
    EXPECT_LT(std::abs(mmdrl::gaussian_moment_series(p, q, 1.0, 12) - mmdrl::mmd_squared(p, q, k)), 1e-6);
  }
  // The truncation error shrinks with the order.
  const DiscreteMeasure p({-1.0, 1.0}, {0.3, 0.7});
  const auto q = DiscreteMeasure::dirac(0.2);
  const double exact = mmdrl::mmd_squared(p, q, k);
  EXPECT_GT(std::abs(mmdrl::gaussian_moment_series(p, q, 1.0, 2) - exact),
            std::abs(mmdrl::gaussian_moment_series(p, q, 1.0, 8) - exact));
}
