#include "mmdrl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mmdrl/errors.hpp"

namespace mmdrl {
namespace {

constexpr double kRowTolerance = 1e-12;

void check_probability_vector(const std::vector<double>& probs, const char* what) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DomainError(std::string(what) + " must be nonnegative");
    }
    total += p;
  }
  if (probs.empty() || std::abs(total - 1.0) > 1e-9) {
    throw DomainError(std::string(what) + " must sum to one");
  }
}

}  // namespace

TabularMdp::TabularMdp(int num_states, int num_actions,
                       std::vector<std::vector<Transition>> transitions,
                       std::vector<int> terminal_states, double gamma)
    : num_states_(num_states),
      num_actions_(num_actions),
      transitions_(std::move(transitions)),
      terminal_(static_cast<std::size_t>(std::max(num_states, 0)), false),
      gamma_(gamma) {
  if (num_states < 1 || num_actions < 1) throw DomainError("MDP needs states and actions");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("discount must lie in [0, 1)");
  if (transitions_.size() != static_cast<std::size_t>(num_states) * num_actions) {
    throw DomainError("transition table does not match the MDP shape");
  }
  for (int s : terminal_states) {
    if (s < 0 || s >= num_states) throw DomainError("terminal state out of range");
    terminal_[static_cast<std::size_t>(s)] = true;
    for (int a = 0; a < num_actions; ++a) {
      transitions_[static_cast<std::size_t>(s) * num_actions + a] = {
          Transition{s, 1.0, DiscreteMeasure::dirac(0.0)}};
    }
  }
  for (const auto& row : transitions_) {
    double total = 0.0;
    std::set<int> seen;
    for (const auto& t : row) {
      if (t.next_state < 0 || t.next_state >= num_states) {
        throw DomainError("successor state out of range");
      }
      if (!seen.insert(t.next_state).second) {
        throw DomainError("duplicate successor in a transition row");
      }
      if (!(t.probability >= 0.0)) throw DomainError("transition probabilities must be >= 0");
      total += t.probability;
    }
    if (std::abs(total - 1.0) > kRowTolerance) {
      throw DomainError("transition row does not sum to one");
    }
  }
}

std::vector<int> TabularMdp::terminal_states() const {
  std::vector<int> out;
  for (int s = 0; s < num_states_; ++s) {
    if (terminal_[static_cast<std::size_t>(s)]) out.push_back(s);
  }
  return out;
}

const std::vector<Transition>& TabularMdp::transitions(int s, int a) const {
  if (s < 0 || s >= num_states_ || a < 0 || a >= num_actions_) {
    throw DomainError("state-action index out of range");
  }
  return transitions_[static_cast<std::size_t>(s) * num_actions_ + a];
}

nlohmann::json TabularMdp::to_json() const {
  nlohmann::json doc;
  doc["num_states"] = num_states_;
  doc["num_actions"] = num_actions_;
  doc["gamma"] = gamma_;
  doc["terminal"] = terminal_states();
  auto rows = nlohmann::json::array();
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_actions_; ++a) {
      for (const auto& t : transitions(s, a)) {
        rows.push_back({{"state", s},
                        {"action", a},
                        {"next_state", t.next_state},
                        {"probability", t.probability},
                        {"rewards", std::vector<double>(t.reward.atoms().begin(), t.reward.atoms().end())},
                        {"reward_probs",
                         std::vector<double>(t.reward.weights().begin(), t.reward.weights().end())}});
      }
    }
  }
  doc["transitions"] = std::move(rows);
  return doc;
}

TabularMdp TabularMdp::from_json(const nlohmann::json& doc) {
  try {
    const int num_states = doc.at("num_states").get<int>();
    const int num_actions = doc.at("num_actions").get<int>();
    if (num_states < 1 || num_actions < 1) throw DomainError("MDP needs states and actions");
    std::vector<std::vector<Transition>> rows(static_cast<std::size_t>(num_states) * num_actions);
    for (const auto& t : doc.at("transitions")) {
      const int s = t.at("state").get<int>();
      const int a = t.at("action").get<int>();
      if (s < 0 || s >= num_states || a < 0 || a >= num_actions) {
        throw DomainError("transition refers to an unknown state or action");
      }
      rows[static_cast<std::size_t>(s) * num_actions + a].push_back(
          Transition{t.at("next_state").get<int>(), t.at("probability").get<double>(),
                     DiscreteMeasure(t.at("rewards").get<std::vector<double>>(),
                                     t.at("reward_probs").get<std::vector<double>>())});
    }
    return TabularMdp(num_states, num_actions, std::move(rows),
                      doc.value("terminal", std::vector<int>{}), doc.at("gamma").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed MDP document: ") + e.what());
  }
}

Policy::Policy(std::vector<std::vector<double>> action_probs) : probs_(std::move(action_probs)) {
  if (probs_.empty()) throw DomainError("policy needs at least one state");
  const auto num_actions = probs_.front().size();
  for (const auto& row : probs_) {
    if (row.size() != num_actions) throw DomainError("policy rows differ in length");
    check_probability_vector(row, "policy action probabilities");
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    if (std::abs(total - 1.0) > kRowTolerance) throw DomainError("policy row does not sum to one");
  }
}

Policy Policy::deterministic(const std::vector<int>& actions, int num_actions) {
  std::vector<std::vector<double>> rows;
  for (int a : actions) {
    if (a < 0 || a >= num_actions) throw DomainError("policy action out of range");
    std::vector<double> row(static_cast<std::size_t>(num_actions), 0.0);
    row[static_cast<std::size_t>(a)] = 1.0;
    rows.push_back(std::move(row));
  }
  return Policy(std::move(rows));
}

Policy Policy::constant(int num_states, int num_actions, int action) {
  return deterministic(std::vector<int>(static_cast<std::size_t>(num_states), action), num_actions);
}

Policy Policy::random(int num_states, int num_actions, Rng& rng) {
  std::vector<std::vector<double>> rows;
  for (int s = 0; s < num_states; ++s) {
    std::vector<double> row(static_cast<std::size_t>(num_actions));
    double total = 0.0;
    for (double& p : row) total += (p = uniform01(rng) + 1e-3);
    for (double& p : row) p /= total;
    // Absorb the rounding residue so the row sums to one within 1e-12.
    row.back() = 1.0 - std::accumulate(row.begin(), row.end() - 1, 0.0);
    rows.push_back(std::move(row));
  }
  return Policy(std::move(rows));
}

int Policy::sample(int s, Rng& rng) const { return static_cast<int>(sample_index(probs(s), rng)); }

TabularMdp build_chain(int length, double gamma) {
  if (length < 2) throw DomainError("chain length must be at least 2");
  const int terminal = length - 1;
  auto reward_into = [&](int next) {
    if (next == 0) return DiscreteMeasure::dirac(-1.0);
    if (next == terminal) return DiscreteMeasure::dirac(1.0);
    return DiscreteMeasure::dirac(0.0);
  };
  std::vector<std::vector<Transition>> rows(static_cast<std::size_t>(length) * 2);
  for (int s = 0; s < terminal; ++s) {
    const int right = s + 1;
    rows[static_cast<std::size_t>(s) * 2 + kForward] = {Transition{right, 0.9, reward_into(right)},
                                                        Transition{0, 0.1, reward_into(0)}};
    rows[static_cast<std::size_t>(s) * 2 + kBackward] = {Transition{right, 0.1, reward_into(right)},
                                                         Transition{0, 0.9, reward_into(0)}};
  }
  return TabularMdp(length, 2, std::move(rows), {terminal}, gamma);
}

std::vector<double> counterexample_reward_probs(int n, double gamma, double alpha) {
  if (n < 2) throw DomainError("counterexample needs at least two rewards");
  if (!(alpha > 0.0)) throw DomainError("order must be positive");
  const double target = std::pow(gamma, 2.0 * alpha);
  const double m = n - 1;
  if (!(target >= 1.0 / n && target < 1.0)) {
    throw DomainError("sum of squared reward probabilities must lie in [1/n, 1)");
  }
  // m eps^2 + (1 - m eps)^2 = target, smaller root.
  const double a = m + m * m;
  const double b = -2.0 * m;
  const double c = 1.0 - target;
  const double eps = (-b - std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
  std::vector<double> probs(static_cast<std::size_t>(n), eps);
  probs.back() = 1.0 - m * eps;
  return probs;
}

Counterexample build_counterexample(double gamma, const std::vector<double>& rewards,
                                    const std::vector<double>& reward_probs,
                                    const std::vector<double>& p_weights,
                                    const std::vector<double>& q_weights) {
  const auto n = rewards.size();
  if (n == 0 || reward_probs.size() != n || p_weights.size() != n || q_weights.size() != n) {
    throw DomainError("counterexample vectors must share one nonzero length");
  }
  check_probability_vector(reward_probs, "reward probabilities");
  check_probability_vector(p_weights, "p weights");
  check_probability_vector(q_weights, "q weights");
  const DiscreteMeasure reward(rewards, reward_probs);
  std::vector<std::vector<Transition>> rows = {{Transition{1, 1.0, reward}},
                                               {Transition{1, 1.0, reward}}};
  TabularMdp mdp(2, 1, std::move(rows), {}, gamma);
  const DiscreteMeasure p(rewards, p_weights);
  const DiscreteMeasure q(rewards, q_weights);
  return Counterexample{std::move(mdp), ReturnTable(2, 1, p), ReturnTable(2, 1, q)};
}

StepResult sample_transition(const TabularMdp& mdp, int s, int a, Rng& rng) {
  if (mdp.is_terminal(s)) return {0.0, s};
  const auto& row = mdp.transitions(s, a);
  std::vector<double> probs;
  probs.reserve(row.size());
  for (const auto& t : row) probs.push_back(t.probability);
  const auto& chosen = row[sample_index(probs, rng)];
  const auto& reward = chosen.reward;
  const double r =
      reward.size() == 1 ? reward.atoms()[0] : reward.atoms()[sample_index(reward.weights(), rng)];
  return {r, chosen.next_state};
}

std::vector<double> mc_returns(const TabularMdp& mdp, const Policy& policy, int start_state,
                               int num_rollouts, int horizon, Rng& rng,
                               std::optional<int> first_action) {
  if (num_rollouts <= 0) throw DomainError("need at least one rollout");
  if (horizon < 1) throw DomainError("horizon must be positive");
  if (mdp.gamma() > 0.0 && std::pow(mdp.gamma(), horizon) >= 1e-6) {
    throw DomainError("horizon too short: discount^horizon must be below 1e-6");
  }
  std::vector<double> returns;
  returns.reserve(static_cast<std::size_t>(num_rollouts));
  for (int i = 0; i < num_rollouts; ++i) {
    int s = start_state;
    double discount = 1.0;
    double total = 0.0;
    for (int t = 0; t < horizon && !mdp.is_terminal(s); ++t) {
      const int a = (t == 0 && first_action) ? *first_action : policy.sample(s, rng);
      const auto step = sample_transition(mdp, s, a, rng);
      total += discount * step.reward;
      discount *= mdp.gamma();
      s = step.next_state;
    }
    returns.push_back(total);
  }
  return returns;
}

std::vector<double> mc_rollout_moments(const TabularMdp& mdp, const Policy& policy,
                                       int start_state, int num_rollouts, int max_order,
                                       int horizon, Rng& rng, std::optional<int> first_action) {
  const auto returns = mc_returns(mdp, policy, start_state, num_rollouts, horizon, rng, first_action);
  return sample_central_moments(returns, max_order);
}

StateActionTable<double> expected_returns(const TabularMdp& mdp, const Policy& policy,
                                          int iterations) {
  const int ns = mdp.num_states();
  const int na = mdp.num_actions();
  StateActionTable<double> q(ns, na, 0.0);
  for (int it = 0; it < iterations; ++it) {
    StateActionTable<double> next(ns, na, 0.0);
    for (int s = 0; s < ns; ++s) {
      if (mdp.is_terminal(s)) continue;
      for (int a = 0; a < na; ++a) {
        double value = 0.0;
        for (const auto& t : mdp.transitions(s, a)) {
          double continuation = 0.0;
          if (!mdp.is_terminal(t.next_state)) {
            const auto& pi = policy.probs(t.next_state);
            for (int b = 0; b < na; ++b) continuation += pi[static_cast<std::size_t>(b)] * q.at(t.next_state, b);
          }
          value += t.probability * (t.reward.mean() + mdp.gamma() * continuation);
        }
        next.at(s, a) = value;
      }
    }
    q = std::move(next);
  }
  return q;
}

}  // namespace mmdrl
