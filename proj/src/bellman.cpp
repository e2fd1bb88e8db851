#include "mmdrl/bellman.hpp"

#include "mmdrl/errors.hpp"

namespace mmdrl {
namespace {

template <class Table>
int argmax_mean(const Table& table, int s) {
  int best = 0;
  double best_mean = table.at(s, 0).mean();
  for (int a = 1; a < table.num_actions(); ++a) {
    const double m = table.at(s, a).mean();
    if (m > best_mean) {
      best = a;
      best_mean = m;
    }
  }
  return best;
}

}  // namespace

ReturnTable apply_bellman_exact(const TabularMdp& mdp, const Policy& policy, const ReturnTable& mu) {
  if (mu.num_states() != mdp.num_states() || mu.num_actions() != mdp.num_actions()) {
    throw DomainError("return table does not match the MDP");
  }
  if (policy.num_states() != mdp.num_states() || policy.num_actions() != mdp.num_actions()) {
    throw DomainError("policy does not match the MDP");
  }
  const double gamma = mdp.gamma();
  std::vector<DiscreteMeasure> entries;
  entries.reserve(mu.entries().size());
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int a = 0; a < mdp.num_actions(); ++a) {
      if (mdp.is_terminal(s)) {
        entries.push_back(DiscreteMeasure::dirac(0.0));
        continue;
      }
      std::vector<DiscreteMeasure> parts;
      std::vector<double> probs;
      for (const auto& t : mdp.transitions(s, a)) {
        if (t.probability == 0.0) continue;
        const auto rewards = t.reward.atoms();
        const auto reward_probs = t.reward.weights();
        for (std::size_t i = 0; i < rewards.size(); ++i) {
          const double branch = t.probability * reward_probs[i];
          if (branch == 0.0) continue;
          if (mdp.is_terminal(t.next_state)) {
            parts.push_back(DiscreteMeasure::dirac(rewards[i]));
            probs.push_back(branch);
            continue;
          }
          const auto& pi = policy.probs(t.next_state);
          for (int b = 0; b < mdp.num_actions(); ++b) {
            const double w = branch * pi[static_cast<std::size_t>(b)];
            if (w == 0.0) continue;
            parts.push_back(pushforward_affine(mu.at(t.next_state, b), rewards[i], gamma));
            probs.push_back(w);
          }
        }
      }
      entries.push_back(mixture(parts, probs));
    }
  }
  return ReturnTable(mdp.num_states(), mdp.num_actions(), std::move(entries));
}

ParticleSet empirical_target(double reward, int next_state, int next_action,
                             const ParticleTable& target, double gamma, bool next_terminal) {
  const auto& next = target.at(next_state, next_action);
  if (next_terminal) return ParticleSet(next.size(), reward);
  std::vector<double> out(next.particles().begin(), next.particles().end());
  for (double& z : out) z = reward + gamma * z;
  return ParticleSet(std::move(out));
}

int greedy_action(const ReturnTable& table, int s) { return argmax_mean(table, s); }

int greedy_action(const ParticleTable& table, int s) { return argmax_mean(table, s); }

}  // namespace mmdrl
