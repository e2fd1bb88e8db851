#include <gtest/gtest.h>

#include <cmath>

#include "mmdrl/errors.hpp"
#include "mmdrl/kernels.hpp"
#include "mmdrl/rng.hpp"
#include "oracles.hpp"

using mmdrl::Kernel;

TEST(Kernel, GaussianValues) {
  const auto k = Kernel::gaussian(1.0);
  EXPECT_DOUBLE_EQ(k(0.0, 0.0), 1.0);
  EXPECT_NEAR(k(0.0, 1.0), 0.367879, 1e-6);
  EXPECT_DOUBLE_EQ(k(0.0, 1.0), std::exp(-1.0));
}

TEST(Kernel, UnrectifiedValue) { EXPECT_DOUBLE_EQ(Kernel::unrectified(1.0)(0.0, 2.0), -2.0); }

TEST(Kernel, MixtureDiagonalIsComponentCount) {
  EXPECT_DOUBLE_EQ(Kernel::gaussian_mixture({1.0, 2.0})(0.0, 0.0), 2.0);
}

TEST(Kernel, GradientValues) {
  EXPECT_DOUBLE_EQ(Kernel::gaussian(1.0).grad_x(0.0, 0.0), 0.0);
  EXPECT_NEAR(Kernel::gaussian(1.0).grad_x(1.0, 0.0), -0.735759, 1e-6);
  EXPECT_DOUBLE_EQ(Kernel::unrectified(2.0).grad_x(3.0, 1.0), -4.0);
}

TEST(Kernel, UnrectifiedKinkHasZeroSubgradient) {
  EXPECT_EQ(Kernel::unrectified(1.0).grad_x(0.3, 0.3), 0.0);
  EXPECT_EQ(Kernel::unrectified(0.5).grad_x(-2.0, -2.0), 0.0);
}

TEST(Kernel, ExpProdMatchesFormula) {
  const auto k = Kernel::exp_prod(0.5);
  EXPECT_NEAR(k(0.3, -0.7), oracle::exp_prod(0.5)(0.3, -0.7), 1e-15);
  EXPECT_NEAR(k.grad_x(0.3, -0.7), -0.7 / 0.5 * std::exp(0.3 * -0.7 / 0.5), 1e-15);
}

TEST(Kernel, RejectsInvalidParameters) {
  EXPECT_THROW(Kernel::gaussian(0.0), mmdrl::DomainError);
  EXPECT_THROW(Kernel::gaussian(-1.0), mmdrl::DomainError);
  EXPECT_THROW(Kernel::gaussian_mixture({}), mmdrl::DomainError);
  EXPECT_THROW(Kernel::unrectified(0.0), mmdrl::DomainError);
  EXPECT_THROW(Kernel::unrectified(2.5), mmdrl::DomainError);
  EXPECT_THROW(Kernel::unrectified_mixture({1.0}, {-1.0}), mmdrl::DomainError);
  EXPECT_THROW(Kernel::exp_prod(0.0), mmdrl::DomainError);
  EXPECT_THROW(Kernel::gaussian(1.0)(NAN, 0.0), mmdrl::DomainError);
}

TEST(Kernel, ParseRoundTrip) {
  for (const char* spec : {"gaussian:h=1", "gaussian_mix:h=8,10,12", "unrectified:alpha=1.5",
                           "unrectified_mix:alpha=0.5,1.5;c=1,2", "expprod:sigma2=0.01"}) {
    const auto k = Kernel::parse(spec);
    const auto again = Kernel::parse(k.to_string());
    for (double x : {-1.3, 0.0, 0.4}) {
      EXPECT_DOUBLE_EQ(k(x, 0.9), again(x, 0.9)) << spec;
    }
  }
  EXPECT_DOUBLE_EQ(Kernel::parse("unrectified_mix:alpha=1,2")(0.0, 1.0), -2.0);
  EXPECT_THROW(Kernel::parse("laplace:h=1"), mmdrl::DomainError);
  EXPECT_THROW(Kernel::parse("gaussian:h=abc"), mmdrl::DomainError);
}

TEST(Kernel, NamedDefaults) {
  EXPECT_DOUBLE_EQ(Kernel::tabular_default()(0.0, 0.0), 3.0);
  EXPECT_DOUBLE_EQ(Kernel::atari_mixture()(0.0, 0.0), 10.0);
}

TEST(Kernel, MinScaleOrder) {
  EXPECT_DOUBLE_EQ(Kernel::unrectified(1.5).min_scale_order(), 1.5);
  EXPECT_DOUBLE_EQ(Kernel::unrectified_mixture({0.5, 1.5}, {0.0, 1.0}).min_scale_order(), 1.5);
  EXPECT_DOUBLE_EQ(Kernel::unrectified_mixture({0.5, 1.5}, {1.0, 1.0}).min_scale_order(), 0.5);
}

class KernelVariants : public ::testing::TestWithParam<const char*> {};

TEST_P(KernelVariants, Symmetric) {
  const auto k = Kernel::parse(GetParam());
  auto rng = mmdrl::make_rng({11});
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng);
    EXPECT_LT(std::abs(k(x, y) - k(y, x)), 1e-15);
  }
}

TEST_P(KernelVariants, GradientMatchesFiniteDifference) {
  const auto k = Kernel::parse(GetParam());
  auto rng = mmdrl::make_rng({12});
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    double y = u(rng);
    if (std::abs(x - y) < 0.05) y += 0.1;
    const double h = 1e-6;
    const double fd = (k(x + h, y) - k(x - h, y)) / (2 * h);
    const double g = k.grad_x(x, y);
    EXPECT_LT(std::abs(g - fd), 1e-5 * std::max(std::abs(fd), 1e-3)) << x << " " << y;
  }
}

INSTANTIATE_TEST_SUITE_P(All, KernelVariants,
                         ::testing::Values("gaussian:h=0.7", "gaussian_mix:h=8,10,12",
                                           "unrectified:alpha=0.5", "unrectified:alpha=1",
                                           "unrectified:alpha=1.5",
                                           "unrectified_mix:alpha=0.5,1.5;c=0.3,1",
                                           "expprod:sigma2=1"));

TEST(Kernel, UnrectifiedScaleAndShift) {
  auto rng = mmdrl::make_rng({13});
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const auto k = Kernel::unrectified(alpha);
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng), y = u(rng), c = u(rng);
      const double expected = std::pow(std::abs(c), alpha) * k(x, y);
      EXPECT_LE(std::abs(k(c * x, c * y) - expected), 1e-12 * std::abs(expected) + 1e-300);
      // Dyadic points keep the shifted difference exact.
      const double xd = std::round(x * 1024) / 1024, yd = std::round(y * 1024) / 1024;
      const double cd = std::round(c * 1024) / 1024;
      EXPECT_EQ(k(xd + cd, yd + cd), k(xd, yd));
    }
  }
}

TEST(Kernel, GaussianShiftInvariant) {
  auto rng = mmdrl::make_rng({14});
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto k = Kernel::gaussian_mixture({0.5, 2.0});
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), y = u(rng), c = u(rng);
    EXPECT_NEAR(k(x + c, y + c), k(x, y), 1e-15);
  }
  EXPECT_TRUE(k.shift_invariant());
  EXPECT_FALSE(Kernel::exp_prod(1.0).shift_invariant());
}
