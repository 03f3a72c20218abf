#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "morl/environment.hpp"
#include "morl/evaluation.hpp"
#include "morl/random.hpp"
#include "morl/scalarisation.hpp"

namespace morl {

/// Linear decay from `initial` to `final_value` over the first
/// `decay_fraction` of the run, constant afterwards.
struct EpsilonSchedule {
  double initial = 1.0;
  double final_value = 0.1;
  double decay_fraction = 1.0;

  void validate() const;
  double at(std::size_t t, std::size_t total) const;
};

struct MoqConfig {
  double alpha = 0.1;
  double gamma = 0.9;
  std::size_t total_timesteps = 400'000;
  ScalariserKind scalariser = ScalariserKind::Linear;
  WeightVector weights{std::vector<double>{0.5, 0.5}};
  double tau = 4.0;
  EpsilonSchedule epsilon;
  std::size_t eval_interval = 1000;

  void validate(std::size_t num_objectives) const;
};

/// Dense (state, action) -> Q-vector table, zero-initialised.
class VectorQTable {
 public:
  VectorQTable(std::size_t states, std::size_t actions, std::size_t objectives);

  QRow row(std::size_t state) const;
  std::span<double> at(std::size_t state, std::size_t action);
  std::span<const double> at(std::size_t state, std::size_t action) const;

  std::size_t states() const { return states_; }
  std::size_t actions() const { return actions_; }
  std::size_t objectives() const { return objectives_; }

  friend bool operator==(const VectorQTable&, const VectorQTable&) = default;

 private:
  std::size_t states_;
  std::size_t actions_;
  std::size_t objectives_;
  std::vector<double> values_;
};

/// Single-policy multi-objective Q-learning. Every objective keeps its own
/// Q-estimate; actions are chosen through the configured scalariser, and the
/// update bootstraps all objectives on the scalarised-greedy next action.
class MoqAgent {
 public:
  MoqAgent(const EnvSpec& spec, MoqConfig config, Rng rng);

  /// Epsilon-greedy action.
  std::size_t act(std::size_t state, double epsilon);
  /// Greedy action; refreshes the utopian point from the state's Q-row.
  std::size_t greedy(std::size_t state);
  /// Greedy action for evaluation rollouts: leaves the agent untouched and
  /// draws tie-breaks from `rng`.
  std::size_t greedy_for_evaluation(std::size_t state, Rng& rng) const;

  void update(std::size_t state, std::size_t action, std::span<const double> reward,
              std::size_t next_state, bool terminated);

  const VectorQTable& table() const { return table_; }
  const UtopianTracker& tracker() const { return tracker_; }
  const MoqConfig& config() const { return config_; }

 private:
  MoqConfig config_;
  VectorQTable table_;
  UtopianTracker tracker_;
  Rng rng_;
  std::size_t action_count_;
};

struct MoqRun {
  VectorQTable table;
  std::vector<EvaluatedReturn> timeline;
};

/// Trains one weight configuration on a private copy of `env`, evaluating the
/// greedy policy per `evaluation_schedule`. Fully determined by `seed`.
MoqRun train_moq(const Environment& env, const MoqConfig& config, std::uint64_t seed);

}  // namespace morl
