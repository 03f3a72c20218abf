#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morl/environment.hpp"
#include "morl/evaluation.hpp"
#include "morl/moq_agent.hpp"
#include "morl/pareto.hpp"
#include "morl/random.hpp"

namespace morl {

enum class SetEvalMode { Hypervolume, Cardinality, Pareto };

SetEvalMode parse_set_eval(std::string_view token);
std::string to_string(SetEvalMode mode);

struct SetEvaluation {
  SetEvalMode mode = SetEvalMode::Hypervolume;
  std::optional<ObjectiveVector> ref;  // required in hypervolume mode only

  void validate() const;
};

/// Scores every action's Q-set at one state; higher is better.
///  - hypervolume: HV of the action's set against `ref`
///  - cardinality: how many of the action's points survive in the
///    non-dominated union of all actions' sets
///  - pareto: 1 if the action contributes any such point, else 0
std::vector<double> evaluate_action_sets(std::span<const ParetoArchive> action_sets,
                                         const SetEvaluation& eval);

/// Pareto Q-learning tables: per (state, action) the visit count, the running
/// mean immediate reward, and the non-dominated set of discounted future
/// returns observed from the successor state.
class QSetStore {
 public:
  QSetStore(std::size_t states, std::size_t actions, std::size_t objectives);

  std::size_t visits(std::size_t state, std::size_t action) const;
  std::span<const double> mean_reward(std::size_t state, std::size_t action) const;
  const ParetoArchive& future_front(std::size_t state, std::size_t action) const;

  /// {mean_reward + gamma * v : v in future_front}; {mean_reward} when the
  /// future front is empty; {} for unvisited pairs.
  ParetoArchive qset(std::size_t state, std::size_t action, double gamma) const;

  void update(std::size_t state, std::size_t action, std::span<const double> reward,
              std::size_t next_state, bool terminated, double gamma);

  std::size_t states() const { return states_; }
  std::size_t actions() const { return actions_; }
  std::size_t objectives() const { return objectives_; }

 private:
  std::size_t index(std::size_t state, std::size_t action) const;

  std::size_t states_;
  std::size_t actions_;
  std::size_t objectives_;
  std::vector<std::size_t> visits_;
  std::vector<double> mean_reward_;
  std::vector<ParetoArchive> future_;
};

/// Non-dominated union of every action's Q-set at `state`: the agent's
/// current Pareto-front approximation when `state` is the start state.
ParetoArchive pql_front(const QSetStore& store, std::size_t state, double gamma);

inline constexpr std::size_t kDefaultStateCap = 50'000;

struct PqlConfig {
  double gamma = 0.9;
  std::size_t total_timesteps = 400'000;
  EpsilonSchedule epsilon;
  SetEvaluation set_eval;
  // Upper bound on state_count * action_count.
  std::size_t state_cap = kDefaultStateCap;
  std::size_t eval_interval = 1000;

  void validate(std::size_t num_objectives) const;
};

class PqlAgent {
 public:
  /// Throws CapacityError when the environment exceeds `config.state_cap`.
  PqlAgent(const EnvSpec& spec, PqlConfig config, Rng rng);

  std::size_t act(std::size_t state, double epsilon);
  void update(std::size_t state, std::size_t action, std::span<const double> reward,
              std::size_t next_state, bool terminated);

  ParetoArchive front(std::size_t state) const { return pql_front(store_, state, config_.gamma); }
  const QSetStore& store() const { return store_; }

 private:
  PqlConfig config_;
  QSetStore store_;
  Rng rng_;
};

/// Throws CapacityError if Pareto Q-learning cannot be run on `spec`.
void check_pql_capacity(const EnvSpec& spec, std::size_t state_cap);

struct PqlRun {
  QSetStore store;
  ApproximationSetTimeline timeline;
};

PqlRun train_pql(const Environment& env, const PqlConfig& config, std::uint64_t seed);

}  // namespace morl
