#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "morl/environment.hpp"
#include "morl/pareto.hpp"

namespace morl {

// Maps a state to the action a trained agent would take greedily.
using GreedyPolicy = std::function<std::size_t(std::size_t state)>;

/// Runs one episode from reset, following `policy`, and returns the
/// discounted vector return sum_t gamma^t r_t. The rollout stops on
/// termination, truncation, or after `max_steps` (default: the environment's
/// episode limit).
ObjectiveVector evaluate_policy(Environment& env, const GreedyPolicy& policy, double gamma,
                                std::optional<std::size_t> max_steps = std::nullopt);

struct EvaluatedReturn {
  std::size_t timestep = 0;
  ObjectiveVector value;
};

struct FrontSnapshot {
  std::size_t timestep = 0;
  ParetoArchive front;
};

using ApproximationSetTimeline = std::vector<FrontSnapshot>;

/// Timesteps at which a run of `total` steps is evaluated: 0, every
/// `interval` steps, and `total` itself.
std::vector<std::size_t> evaluation_schedule(std::size_t total, std::size_t interval);

}  // namespace morl
