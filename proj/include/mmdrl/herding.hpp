#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmdrl/kernels.hpp"
#include "mmdrl/measures.hpp"
#include "mmdrl/rng.hpp"

namespace mmdrl {

struct HerdingResult {
  ParticleSet particles;
  double mmd = 0.0;
  int iterations_used = 0;
};

struct DescentOptions {
  int max_steps = 2000;
  double learning_rate = 0.1;
  int restarts = 5;
  // Step-size multiplier after an accepted step; halved after a rejected one.
  double growth = 1.2;
};

/// Minimizes MMD^2(uniform(particles), target) over particle positions by
/// backtracking gradient descent. A step is accepted only if it lowers the
/// objective, so the objective never increases. Each restart starts from n
/// samples of the target; the best restart wins.
HerdingResult optimize_particles(const DiscreteMeasure& target, int n, const Kernel& k,
                                 const DescentOptions& options, Rng& rng);

// Same descent from a given starting configuration (single run).
HerdingResult descend_from(const DiscreteMeasure& target, std::vector<double> start,
                           const Kernel& k, const DescentOptions& options);

/// Descent for each n in ascending `ns`, additionally warm-started from the
/// previous solution (each particle repeated when n is a multiple of the
/// previous size, padded with target samples otherwise). For doubling
/// sequences the warm start embeds the previous measure exactly, so the
/// achieved MMD is nonincreasing in n.
std::vector<HerdingResult> optimize_particles_sweep(const DiscreteMeasure& target,
                                                    const std::vector<int>& ns, const Kernel& k,
                                                    const DescentOptions& options, Rng& rng);

/// Greedy kernel herding over a candidate grid: x_{t+1} maximizes
/// E_{x~target} k(x, c) - (1/(t+1)) sum_{j<=t} k(x_j, c).
HerdingResult greedy_herd(const DiscreteMeasure& target, int n, const Kernel& k,
                          const std::vector<double>& candidate_grid);

enum class HerdingMethod { kDescent, kGreedy };

std::string to_string(HerdingMethod method);

struct RatePoint {
  int n;
  double mmd;
  bool used_in_fit;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<RatePoint> points;
};

/// Least-squares slope of log(MMD) against log(n). Points whose MMD is below
/// `exclusion_threshold` are left out of the fit: an exact representation
/// leaves MMD^2 at rounding level (~1e-16), i.e. MMD near 1e-8.
RateFit fit_rate(const std::vector<int>& ns, const std::vector<double>& mmds,
                 double exclusion_threshold = 1e-6);

struct RateExperimentOptions {
  DescentOptions descent;
  // Greedy candidates; when empty, 2001 evenly spaced points spanning the
  // target support padded by 10% on each side.
  std::vector<double> grid;
  double exclusion_threshold = 1e-6;
  std::uint64_t seed = 0;
};

/// Requires at least 4 distinct n spanning two octaves; throws DomainError
/// when fewer than 3 points survive the exclusion rule.
RateFit rate_experiment(const DiscreteMeasure& target, const std::vector<int>& ns, const Kernel& k,
                        HerdingMethod method, const RateExperimentOptions& options);

// n atoms at the midpoint quantiles (i + 1/2)/n of Normal(mean, sd).
DiscreteMeasure discretized_gaussian(int n, double mean = 0.0, double sd = 1.0);

}  // namespace mmdrl
