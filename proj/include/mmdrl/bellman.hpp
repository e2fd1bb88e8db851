#pragma once

#include "mmdrl/mdp.hpp"
#include "mmdrl/measures.hpp"
#include "mmdrl/return_table.hpp"

namespace mmdrl {

/// Exact distributional Bellman operator:
///   (T mu)(s, a) = sum_{s', a', r} P(s'|s,a) pi(a'|s') R(r|s,a,s') (f_{r,gamma})_# mu(s', a').
/// Terminal successors contribute delta_r (their return distribution is
/// delta_0), and terminal entries of the result are delta_0. Atom counts
/// grow multiplicatively; no projection is applied.
ReturnTable apply_bellman_exact(const TabularMdp& mdp, const Policy& policy, const ReturnTable& mu);

/// Sample Bellman target: particle i is reward + gamma * target(s', a*)_i, or
/// N copies of the reward when s' is terminal.
ParticleSet empirical_target(double reward, int next_state, int next_action,
                             const ParticleTable& target, double gamma, bool next_terminal);

// Action with the largest entry mean; ties go to the lowest index.
int greedy_action(const ReturnTable& table, int s);
int greedy_action(const ParticleTable& table, int s);

}  // namespace mmdrl
