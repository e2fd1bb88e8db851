#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmdrl/kernels.hpp"
#include "mmdrl/mdp.hpp"
#include "mmdrl/return_table.hpp"
#include "mmdrl/rng.hpp"

namespace mmdrl {

enum class LearnerKind { kMmdrl, kQrdrl };

// Evaluation draws a* ~ pi(.|s'); control uses the greedy action under theta.
enum class TargetMode { kEvaluation, kControl };

// How the MMD gradient is turned into a per-particle step.
//   kObjective:   theta_i -= lr * d MMD_b^2 / d theta_i, whose terms carry 1/N^2.
//   kPerParticle: theta_i -= lr * N * d MMD_b^2 / d theta_i, so each particle
//                 moves by an average over j, the same normalization as the
//                 quantile-regression step.
enum class GradientScaling { kObjective, kPerParticle };

struct LearnerConfig {
  int num_particles = 30;
  Kernel kernel = Kernel::tabular_default();
  double lr_exponent = 0.2;  // lr_t = 1 / t^lr_exponent
  double init_mean = -1.0;
  double init_std = 0.08;
  int episodes_per_iter = 100;
  int num_iters = 15;
  int max_episode_steps = 1000;
  int start_state = 0;
  TargetMode mode = TargetMode::kEvaluation;
  GradientScaling scaling = GradientScaling::kPerParticle;
  std::uint64_t seed = 0;

  double learning_rate(std::int64_t step) const;
  void validate() const;
};

struct LearnerState {
  ParticleTable theta;
  ParticleTable theta_minus;
  std::int64_t step = 1;  // global counter driving the learning-rate schedule
};

struct SampledTransition {
  int state;
  int action;
  double reward;
  int next_state;
};

// Particles drawn i.i.d. from Normal(init_mean, init_std).
LearnerState init_learner_state(const TabularMdp& mdp, const LearnerConfig& cfg, Rng& rng);

// Quantile-regression TD gradient against fixed targets:
//   g_i = -(1/M) sum_j (tau_i - 1{t_j < theta_i}),  tau_i = (2i - 1) / (2N).
std::vector<double> qrdrl_grad(const ParticleSet& theta, const ParticleSet& targets);

// Quantile (pinball) loss (1/N) sum_i (1/M) sum_j rho_{tau_i}(t_j - theta_i).
double quantile_loss(std::span<const double> theta, std::span<const double> targets);

void mmdrl_td_step(LearnerState& state, const SampledTransition& tr, const TabularMdp& mdp,
                   const Policy& policy, const LearnerConfig& cfg, Rng& rng);

void qrdrl_td_step(LearnerState& state, const SampledTransition& tr, const TabularMdp& mdp,
                   const Policy& policy, const LearnerConfig& cfg, Rng& rng);

/// Runs episodes_per_iter * num_iters on-policy episodes from start_state,
/// applying one TD step per transition. Throws DivergenceError if any
/// particle leaves [-10/(1-gamma), 10/(1-gamma)].
ParticleTable run_policy_evaluation(const TabularMdp& mdp, const Policy& policy, LearnerKind kind,
                                    const LearnerConfig& cfg);

std::string to_string(LearnerKind kind);

}  // namespace mmdrl
