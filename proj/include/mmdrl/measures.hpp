#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace mmdrl {

/// Finite probability measure on the real line: atoms with nonnegative
/// weights summing to one. Atoms are kept as given (no sorting or merging);
/// duplicates are allowed.
///
/// Construction checks that weights sum to 1 within 1e-12. Sums that drift
/// by less than 1e-9 are renormalized; anything larger is rejected.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights);

  static DiscreteMeasure dirac(double z);
  static DiscreteMeasure uniform(std::span<const double> atoms);

  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }

  double mean() const;

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

/// N equally weighted particles.
class ParticleSet {
 public:
  explicit ParticleSet(std::vector<double> particles);
  ParticleSet(std::initializer_list<double> particles) : ParticleSet(std::vector<double>(particles)) {}
  ParticleSet(std::size_t n, double value) : ParticleSet(std::vector<double>(n, value)) {}

  std::span<const double> particles() const { return particles_; }
  std::span<double> mutable_particles() { return particles_; }
  std::size_t size() const { return particles_.size(); }
  double operator[](std::size_t i) const { return particles_[i]; }

  double mean() const;
  DiscreteMeasure measure() const { return DiscreteMeasure::uniform(particles_); }

  friend bool operator==(const ParticleSet&, const ParticleSet&) = default;

 private:
  std::vector<double> particles_;
};

// Image of m under z -> reward + gamma * z.
DiscreteMeasure pushforward_affine(const DiscreteMeasure& m, double reward, double gamma);

// sum_i probs[i] * measures[i]; atoms are concatenated in order.
DiscreteMeasure mixture(std::span<const DiscreteMeasure> measures, std::span<const double> probs);

// Raw moment sum_i w_i z_i^n, or central moment sum_i w_i (z_i - mean)^n.
// The first central moment is defined as the mean.
double moment(const DiscreteMeasure& m, int order, bool central);

// Central moments of orders 1..max_order of an equally weighted sample,
// with the order-1 entry holding the sample mean.
std::vector<double> sample_central_moments(std::span<const double> samples, int max_order);

// Merges atoms into at most `max_atoms` groups of neighbours (after sorting),
// each replaced by its weighted mean. Preserves total weight and the mean.
DiscreteMeasure compact_preserving_mean(const DiscreteMeasure& m, std::size_t max_atoms);

// CSV with header `atom,weight`.
void write_csv(std::ostream& out, const DiscreteMeasure& m);
DiscreteMeasure read_csv(std::istream& in);

}  // namespace mmdrl
