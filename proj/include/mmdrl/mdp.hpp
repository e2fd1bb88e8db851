#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mmdrl/measures.hpp"
#include "mmdrl/return_table.hpp"
#include "mmdrl/rng.hpp"

namespace mmdrl {

// One successor of a (state, action) pair: where it lands, how likely, and
// the reward distribution attached to that landing.
struct Transition {
  int next_state;
  double probability;
  DiscreteMeasure reward;
};

/// Finite MDP with finite-support rewards conditioned on (s, a, s').
///
/// Terminal states are absorbing with reward 0; the constructor installs
/// that self-loop for every terminal state.
class TabularMdp {
 public:
  TabularMdp(int num_states, int num_actions, std::vector<std::vector<Transition>> transitions,
             std::vector<int> terminal_states, double gamma);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double gamma() const { return gamma_; }
  bool is_terminal(int s) const { return terminal_.at(static_cast<std::size_t>(s)); }
  std::vector<int> terminal_states() const;

  const std::vector<Transition>& transitions(int s, int a) const;

  nlohmann::json to_json() const;
  static TabularMdp from_json(const nlohmann::json& doc);

 private:
  int num_states_;
  int num_actions_;
  std::vector<std::vector<Transition>> transitions_;  // indexed s * num_actions + a
  std::vector<bool> terminal_;
  double gamma_;
};

/// pi(a | s) for every state.
class Policy {
 public:
  explicit Policy(std::vector<std::vector<double>> action_probs);

  static Policy deterministic(const std::vector<int>& actions, int num_actions);
  static Policy constant(int num_states, int num_actions, int action);
  static Policy random(int num_states, int num_actions, Rng& rng);

  int num_states() const { return static_cast<int>(probs_.size()); }
  int num_actions() const { return static_cast<int>(probs_.front().size()); }
  const std::vector<double>& probs(int s) const { return probs_.at(static_cast<std::size_t>(s)); }
  int sample(int s, Rng& rng) const;

 private:
  std::vector<std::vector<double>> probs_;
};

inline constexpr int kForward = 0;
inline constexpr int kBackward = 1;

/// Chain of K states. Forward moves right w.p. 0.9 and to s_0 w.p. 0.1;
/// backward does the opposite. Landing in s_0 pays -1 (self-loops
/// included), landing in the terminal s_{K-1} pays +1, anything else 0.
TabularMdp build_chain(int length, double gamma = 0.9);

// Reward probabilities {eps, ..., eps, 1 - (n-1) eps} whose squares sum to
// gamma^(2 alpha). Requires gamma^2 >= 1/n.
std::vector<double> counterexample_reward_probs(int n, double gamma, double alpha);

struct Counterexample {
  TabularMdp mdp;
  ReturnTable mu;
  ReturnTable nu;
};

/// Two-state MDP s_0 -> s_1 -> s_1 (absorbing) where every transition pays
/// a reward drawn from (rewards, reward_probs), with tables
/// mu(s) = sum_i p_i delta_{r_i} and nu(s) = sum_i q_i delta_{r_i} on both states.
Counterexample build_counterexample(double gamma, const std::vector<double>& rewards,
                                    const std::vector<double>& reward_probs,
                                    const std::vector<double>& p_weights,
                                    const std::vector<double>& q_weights);

struct StepResult {
  double reward;
  int next_state;
};

// Terminal states return (0, s) without consuming randomness.
StepResult sample_transition(const TabularMdp& mdp, int s, int a, Rng& rng);

/// Discounted returns of `num_rollouts` episodes from `start_state`,
/// truncated at `horizon` steps or on reaching a terminal state. When
/// `first_action` is set it replaces the policy's first decision.
std::vector<double> mc_returns(const TabularMdp& mdp, const Policy& policy, int start_state,
                               int num_rollouts, int horizon, Rng& rng,
                               std::optional<int> first_action = std::nullopt);

/// Sample mean and central moments 2..max_order of the Monte Carlo returns.
std::vector<double> mc_rollout_moments(const TabularMdp& mdp, const Policy& policy,
                                       int start_state, int num_rollouts, int max_order,
                                       int horizon, Rng& rng,
                                       std::optional<int> first_action = std::nullopt);

inline constexpr int kDefaultHorizon = 200;

// Expected returns Q^pi(s, a) by iterating the scalar Bellman equation.
StateActionTable<double> expected_returns(const TabularMdp& mdp, const Policy& policy,
                                          int iterations = 2000);

}  // namespace mmdrl
