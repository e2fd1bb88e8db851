#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mmdrl {

// k(x, y) = exp(-(x - y)^2 / h)
struct GaussianKernel {
  double bandwidth;
};

// Sum of Gaussian kernels, one per bandwidth.
struct GaussianMixtureKernel {
  std::vector<double> bandwidths;
};

// k(x, y) = -|x - y|^alpha, alpha in (0, 2].
struct UnrectifiedKernel {
  double alpha;
};

// k(x, y) = sum_i c_i * -|x - y|^alpha_i with c_i >= 0.
struct UnrectifiedMixtureKernel {
  std::vector<double> alphas;
  std::vector<double> coefficients;
};

// k(x, y) = exp(x * y / sigma_sq)
struct ExpProdKernel {
  double sigma_sq;
};

/// A scalar kernel on the real line.
///
/// Immutable value type; evaluation is pure and thread-safe. Build one with
/// the named constructors or `Kernel::parse` from a config string such as
/// `gaussian:h=1.0`, `gaussian_mix:h=8,10,12`, `unrectified:alpha=1.0`,
/// `unrectified_mix:alpha=0.5,1.5;c=1,2` or `expprod:sigma2=1.0`.
class Kernel {
 public:
  using Variant = std::variant<GaussianKernel, GaussianMixtureKernel, UnrectifiedKernel,
                               UnrectifiedMixtureKernel, ExpProdKernel>;

  static Kernel gaussian(double bandwidth);
  static Kernel gaussian_mixture(std::vector<double> bandwidths);
  static Kernel unrectified(double alpha);
  static Kernel unrectified_mixture(std::vector<double> alphas, std::vector<double> coefficients);
  static Kernel exp_prod(double sigma_sq);

  // Bandwidths {1, ..., 10}.
  static Kernel atari_mixture();
  // Bandwidths {8, 10, 12} used by the tabular learners.
  static Kernel tabular_default();

  static Kernel parse(std::string_view spec);

  double operator()(double x, double y) const;

  /// d k(x, y) / dx. For unrectified kernels with alpha <= 1 the derivative
  /// does not exist at x == y; 0 is returned there (a valid subgradient).
  double grad_x(double x, double y) const;

  // Canonical config string; `parse(k.to_string())` reproduces `k`.
  std::string to_string() const;

  // Smallest scale-sensitivity order among the components, or 0 when the
  // kernel is not scale sensitive (Gaussian and exp-prod families).
  double min_scale_order() const;

  // True for kernels with k(x + c, y + c) == k(x, y).
  bool shift_invariant() const;

  const Variant& variant() const { return variant_; }

 private:
  explicit Kernel(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

}  // namespace mmdrl
