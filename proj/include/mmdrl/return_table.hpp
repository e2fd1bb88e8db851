#pragma once

#include <cstddef>
#include <vector>

#include "mmdrl/errors.hpp"
#include "mmdrl/measures.hpp"

namespace mmdrl {

/// Dense (state, action) -> T table, row-major in the state index.
template <class T>
class StateActionTable {
 public:
  StateActionTable(int num_states, int num_actions, std::vector<T> entries)
      : num_states_(num_states), num_actions_(num_actions), entries_(std::move(entries)) {
    if (num_states < 1 || num_actions < 1) throw DomainError("table needs states and actions");
    if (entries_.size() != static_cast<std::size_t>(num_states) * num_actions) {
      throw DomainError("table entry count does not match its shape");
    }
  }

  StateActionTable(int num_states, int num_actions, const T& fill)
      : StateActionTable(num_states, num_actions,
                         std::vector<T>(static_cast<std::size_t>(num_states) * num_actions, fill)) {}

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  const T& at(int s, int a) const { return entries_[index(s, a)]; }
  T& at(int s, int a) { return entries_[index(s, a)]; }

  const std::vector<T>& entries() const { return entries_; }

  bool same_shape(const StateActionTable& other) const {
    return num_states_ == other.num_states_ && num_actions_ == other.num_actions_;
  }

  friend bool operator==(const StateActionTable&, const StateActionTable&) = default;

 private:
  std::size_t index(int s, int a) const {
    if (s < 0 || s >= num_states_ || a < 0 || a >= num_actions_) {
      throw DomainError("state-action index out of range");
    }
    return static_cast<std::size_t>(s) * num_actions_ + a;
  }

  int num_states_;
  int num_actions_;
  std::vector<T> entries_;
};

using ReturnTable = StateActionTable<DiscreteMeasure>;
using ParticleTable = StateActionTable<ParticleSet>;

inline ReturnTable to_return_table(const ParticleTable& particles) {
  std::vector<DiscreteMeasure> entries;
  entries.reserve(particles.entries().size());
  for (const auto& p : particles.entries()) entries.push_back(p.measure());
  return ReturnTable(particles.num_states(), particles.num_actions(), std::move(entries));
}

}  // namespace mmdrl
