#include "mmdrl/herding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include <boost/math/distributions/normal.hpp>

#include "mmdrl/errors.hpp"
#include "mmdrl/mmd.hpp"

namespace mmdrl {
namespace {

// MMD^2(uniform(x), target) up to the constant target self-term, plus its
// gradient scaled by n (so each particle sees an average over j).
class ParticleObjective {
 public:
  ParticleObjective(const DiscreteMeasure& target, const Kernel& k) : target_(target), k_(k) {
    const auto a = target.atoms();
    const auto w = target.weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < a.size(); ++j) self_ += w[i] * w[j] * k(a[i], a[j]);
    }
  }

  double value(const std::vector<double>& x) const {
    const double n = static_cast<double>(x.size());
    double within = 0.0;
    double cross = 0.0;
    for (double xi : x) {
      for (double xj : x) within += k_(xi, xj);
      cross += embedding(xi);
    }
    return within / (n * n) - 2.0 * cross / n + self_;
  }

  std::vector<double> scaled_gradient(const std::vector<double>& x) const {
    const double n = static_cast<double>(x.size());
    std::vector<double> g(x.size());
    const auto a = target_.atoms();
    const auto w = target_.weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      double within = 0.0;
      for (double xj : x) within += k_.grad_x(x[i], xj);
      double cross = 0.0;
      for (std::size_t t = 0; t < a.size(); ++t) cross += w[t] * k_.grad_x(x[i], a[t]);
      g[i] = 2.0 / n * within - 2.0 * cross;
    }
    return g;
  }

  double embedding(double c) const {
    double e = 0.0;
    const auto a = target_.atoms();
    const auto w = target_.weights();
    for (std::size_t t = 0; t < a.size(); ++t) e += w[t] * k_(c, a[t]);
    return e;
  }

 private:
  const DiscreteMeasure& target_;
  const Kernel& k_;
  double self_ = 0.0;
};

std::vector<double> sample_target(const DiscreteMeasure& target, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (double& x : out) x = target.atoms()[sample_index(target.weights(), rng)];
  return out;
}

HerdingResult finish(const DiscreteMeasure& target, std::vector<double> x, const Kernel& k,
                     int iterations) {
  ParticleSet particles(std::move(x));
  const double distance = mmd(particles.measure(), target, k);
  return HerdingResult{std::move(particles), distance, iterations};
}

void check_descent_options(const DescentOptions& options) {
  if (options.max_steps < 0 || !(options.learning_rate > 0.0) || options.restarts < 1 ||
      !(options.growth >= 1.0)) {
    throw DomainError("invalid descent options");
  }
}

}  // namespace

HerdingResult descend_from(const DiscreteMeasure& target, std::vector<double> start,
                           const Kernel& k, const DescentOptions& options) {
  check_descent_options(options);
  if (start.empty()) throw DomainError("need at least one particle");
  const ParticleObjective objective(target, k);
  std::vector<double> x = std::move(start);
  double f = objective.value(x);
  if (!std::isfinite(f)) throw DomainError("objective is not finite at the starting point");
  double lr = options.learning_rate;
  int step = 0;
  for (; step < options.max_steps; ++step) {
    const auto g = objective.scaled_gradient(x);
    std::vector<double> trial(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - lr * g[i];
    const double ft = objective.value(trial);
    if (!std::isfinite(ft)) throw DomainError("objective became non-finite during descent");
    if (ft < f) {
      x = std::move(trial);
      f = ft;
      lr *= options.growth;
    } else {
      lr *= 0.5;
      if (lr < 1e-14) break;
    }
  }
  return finish(target, std::move(x), k, step);
}

HerdingResult optimize_particles(const DiscreteMeasure& target, int n, const Kernel& k,
                                 const DescentOptions& options, Rng& rng) {
  if (n < 1) throw DomainError("need at least one particle");
  check_descent_options(options);
  std::optional<HerdingResult> best;
  for (int r = 0; r < options.restarts; ++r) {
    auto start = sample_target(target, static_cast<std::size_t>(n), rng);
    try {
      auto result = descend_from(target, std::move(start), k, options);
      if (!best || result.mmd < best->mmd) best = std::move(result);
    } catch (const DomainError&) {
      // A restart that runs into non-finite values is dropped.
    }
  }
  if (!best) throw DomainError("every descent restart failed");
  return std::move(*best);
}

std::vector<HerdingResult> optimize_particles_sweep(const DiscreteMeasure& target,
                                                    const std::vector<int>& ns, const Kernel& k,
                                                    const DescentOptions& options, Rng& rng) {
  if (!std::is_sorted(ns.begin(), ns.end())) throw DomainError("sweep sizes must be ascending");
  std::vector<HerdingResult> results;
  for (int n : ns) {
    auto best = optimize_particles(target, n, k, options, rng);
    if (!results.empty()) {
      const auto previous = results.back().particles.particles();
      const auto prev_n = previous.size();
      std::vector<double> warm;
      warm.reserve(static_cast<std::size_t>(n));
      if (static_cast<std::size_t>(n) % prev_n == 0) {
        for (double p : previous) warm.insert(warm.end(), static_cast<std::size_t>(n) / prev_n, p);
      } else {
        warm.assign(previous.begin(), previous.end());
        const auto pad = sample_target(target, static_cast<std::size_t>(n) - prev_n, rng);
        warm.insert(warm.end(), pad.begin(), pad.end());
      }
      // The warm start itself is a candidate, so descent can only improve on it.
      auto embedded = finish(target, warm, k, 0);
      // Break ties between repeated particles, which otherwise move together.
      for (std::size_t i = 0; i < warm.size(); ++i) warm[i] += 1e-6 * (static_cast<double>(i % 7) - 3.0);
      auto warm_result = descend_from(target, std::move(warm), k, options);
      if (embedded.mmd < warm_result.mmd) warm_result = std::move(embedded);
      if (warm_result.mmd < best.mmd) best = std::move(warm_result);
    }
    results.push_back(std::move(best));
  }
  return results;
}

HerdingResult greedy_herd(const DiscreteMeasure& target, int n, const Kernel& k,
                          const std::vector<double>& candidate_grid) {
  if (candidate_grid.empty()) throw DomainError("greedy herding needs candidate points");
  if (n < 1) throw DomainError("need at least one particle");
  const ParticleObjective objective(target, k);
  std::vector<double> embedding(candidate_grid.size());
  for (std::size_t c = 0; c < candidate_grid.size(); ++c) {
    embedding[c] = objective.embedding(candidate_grid[c]);
  }
  std::vector<double> chosen_sum(candidate_grid.size(), 0.0);
  std::vector<double> chosen;
  chosen.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidate_grid.size(); ++c) {
      const double score = embedding[c] - chosen_sum[c] / static_cast<double>(t + 1);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    const double x = candidate_grid[best];
    chosen.push_back(x);
    for (std::size_t c = 0; c < candidate_grid.size(); ++c) chosen_sum[c] += k(x, candidate_grid[c]);
  }
  return finish(target, std::move(chosen), k, n);
}

std::string to_string(HerdingMethod method) {
  return method == HerdingMethod::kDescent ? "descent" : "greedy";
}

RateFit fit_rate(const std::vector<int>& ns, const std::vector<double>& mmds,
                 double exclusion_threshold) {
  if (ns.size() != mmds.size()) throw DomainError("sizes and MMD values differ in length");
  RateFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const bool use = mmds[i] >= exclusion_threshold && std::isfinite(mmds[i]);
    fit.points.push_back(RatePoint{ns[i], mmds[i], use});
    if (!use) continue;
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = std::log(mmds[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 3) throw DomainError("fewer than three usable points for the rate fit");
  const double denom = used * sxx - sx * sx;
  fit.slope = (used * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / used;
  return fit;
}

RateFit rate_experiment(const DiscreteMeasure& target, const std::vector<int>& ns, const Kernel& k,
                        HerdingMethod method, const RateExperimentOptions& options) {
  const std::set<int> distinct(ns.begin(), ns.end());
  if (distinct.size() < 4 || *distinct.begin() < 1 || *distinct.rbegin() < 4 * *distinct.begin()) {
    throw DomainError("rate experiment needs at least 4 distinct sizes spanning two octaves");
  }
  const std::vector<int> sizes(distinct.begin(), distinct.end());
  std::vector<double> mmds;
  if (method == HerdingMethod::kDescent) {
    Rng rng = make_rng({options.seed});
    for (const auto& r : optimize_particles_sweep(target, sizes, k, options.descent, rng)) {
      mmds.push_back(r.mmd);
    }
  } else {
    auto grid = options.grid;
    if (grid.empty()) {
      const auto [lo, hi] = std::minmax_element(target.atoms().begin(), target.atoms().end());
      const double pad = std::max(0.1 * (*hi - *lo), 1e-3);
      constexpr int kPoints = 2001;
      for (int i = 0; i < kPoints; ++i) {
        grid.push_back(*lo - pad + (*hi - *lo + 2.0 * pad) * i / (kPoints - 1));
      }
    }
    for (int n : sizes) mmds.push_back(greedy_herd(target, n, k, grid).mmd);
  }
  return fit_rate(sizes, mmds, options.exclusion_threshold);
}

DiscreteMeasure discretized_gaussian(int n, double mean, double sd) {
  if (n < 1 || !(sd > 0.0)) throw DomainError("invalid discretization");
  const boost::math::normal_distribution<double> normal(mean, sd);
  std::vector<double> atoms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) atoms[static_cast<std::size_t>(i)] = quantile(normal, (i + 0.5) / n);
  return DiscreteMeasure::uniform(atoms);
}

}  // namespace mmdrl
