#include "mmdrl/learners.hpp"

#include <cmath>

#include "mmdrl/bellman.hpp"
#include "mmdrl/errors.hpp"
#include "mmdrl/mmd.hpp"

namespace mmdrl {
namespace {

double quantile_level(std::size_t i, std::size_t n) {
  return (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
}

ParticleSet bellman_targets(const LearnerState& state, const SampledTransition& tr,
                            const TabularMdp& mdp, const Policy& policy, const LearnerConfig& cfg,
                            Rng& rng) {
  const bool terminal = mdp.is_terminal(tr.next_state);
  int next_action = 0;
  if (!terminal) {
    next_action = cfg.mode == TargetMode::kEvaluation ? policy.sample(tr.next_state, rng)
                                                      : greedy_action(state.theta, tr.next_state);
  }
  return empirical_target(tr.reward, tr.next_state, next_action, state.theta_minus, mdp.gamma(),
                          terminal);
}

void apply_update(LearnerState& state, const SampledTransition& tr, const std::vector<double>& grad,
                  double step_size, const TabularMdp& mdp) {
  auto particles = state.theta.at(tr.state, tr.action).mutable_particles();
  const double bound = 10.0 / (1.0 - mdp.gamma());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    particles[i] -= step_size * grad[i];
    if (!(std::abs(particles[i]) <= bound)) {
      throw DivergenceError("particle left the admissible return range at step " +
                            std::to_string(state.step));
    }
  }
  state.theta_minus.at(tr.state, tr.action) = state.theta.at(tr.state, tr.action);
  ++state.step;
}

}  // namespace

double LearnerConfig::learning_rate(std::int64_t step) const {
  return 1.0 / std::pow(static_cast<double>(step), lr_exponent);
}

void LearnerConfig::validate() const {
  if (num_particles < 1) throw DomainError("need at least one particle");
  if (!(lr_exponent >= 0.0)) throw DomainError("learning-rate exponent must be nonnegative");
  if (!(init_std >= 0.0)) throw DomainError("initial spread must be nonnegative");
  if (episodes_per_iter < 0 || num_iters < 0 || max_episode_steps < 1) {
    throw DomainError("episode counts must be nonnegative");
  }
}

LearnerState init_learner_state(const TabularMdp& mdp, const LearnerConfig& cfg, Rng& rng) {
  cfg.validate();
  std::normal_distribution<double> init(cfg.init_mean, cfg.init_std);
  std::vector<ParticleSet> entries;
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int a = 0; a < mdp.num_actions(); ++a) {
      std::vector<double> p(static_cast<std::size_t>(cfg.num_particles));
      for (double& x : p) x = init(rng);
      entries.emplace_back(std::move(p));
    }
  }
  ParticleTable theta(mdp.num_states(), mdp.num_actions(), std::move(entries));
  return LearnerState{theta, theta, 1};
}

std::vector<double> qrdrl_grad(const ParticleSet& theta, const ParticleSet& targets) {
  const auto th = theta.particles();
  const auto ts = targets.particles();
  const double m = static_cast<double>(ts.size());
  std::vector<double> grad(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) {
    const double tau = quantile_level(i, th.size());
    double below = 0.0;
    for (double t : ts) below += t < th[i] ? 1.0 : 0.0;
    grad[i] = -(tau * m - below) / m;
  }
  return grad;
}

double quantile_loss(std::span<const double> theta, std::span<const double> targets) {
  double total = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double tau = quantile_level(i, theta.size());
    double row = 0.0;
    for (double t : targets) {
      const double u = t - theta[i];
      row += u * (tau - (u < 0.0 ? 1.0 : 0.0));
    }
    total += row / static_cast<double>(targets.size());
  }
  return total / static_cast<double>(theta.size());
}

void mmdrl_td_step(LearnerState& state, const SampledTransition& tr, const TabularMdp& mdp,
                   const Policy& policy, const LearnerConfig& cfg, Rng& rng) {
  const auto targets = bellman_targets(state, tr, mdp, policy, cfg, rng);
  const auto& current = state.theta.at(tr.state, tr.action);
  const auto grad = mmd_b_grad(current, targets, cfg.kernel);
  double step_size = cfg.learning_rate(state.step);
  if (cfg.scaling == GradientScaling::kPerParticle) step_size *= static_cast<double>(current.size());
  apply_update(state, tr, grad, step_size, mdp);
}

void qrdrl_td_step(LearnerState& state, const SampledTransition& tr, const TabularMdp& mdp,
                   const Policy& policy, const LearnerConfig& cfg, Rng& rng) {
  const auto targets = bellman_targets(state, tr, mdp, policy, cfg, rng);
  const auto grad = qrdrl_grad(state.theta.at(tr.state, tr.action), targets);
  apply_update(state, tr, grad, cfg.learning_rate(state.step), mdp);
}

ParticleTable run_policy_evaluation(const TabularMdp& mdp, const Policy& policy, LearnerKind kind,
                                    const LearnerConfig& cfg) {
  cfg.validate();
  if (policy.num_states() != mdp.num_states() || policy.num_actions() != mdp.num_actions()) {
    throw DomainError("policy does not match the MDP");
  }
  Rng rng = make_rng({cfg.seed});
  auto state = init_learner_state(mdp, cfg, rng);
  const auto step = kind == LearnerKind::kMmdrl ? &mmdrl_td_step : &qrdrl_td_step;
  const int episodes = cfg.episodes_per_iter * cfg.num_iters;
  for (int episode = 0; episode < episodes; ++episode) {
    int s = cfg.start_state;
    for (int t = 0; t < cfg.max_episode_steps && !mdp.is_terminal(s); ++t) {
      const int a = policy.sample(s, rng);
      const auto outcome = sample_transition(mdp, s, a, rng);
      step(state, SampledTransition{s, a, outcome.reward, outcome.next_state}, mdp, policy, cfg, rng);
      s = outcome.next_state;
    }
  }
  return state.theta;
}

std::string to_string(LearnerKind kind) { return kind == LearnerKind::kMmdrl ? "mmdrl" : "qrdrl"; }

}  // namespace mmdrl
