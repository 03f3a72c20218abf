#include "morl/evaluation.hpp"

#include "morl/error.hpp"

namespace morl {

ObjectiveVector evaluate_policy(Environment& env, const GreedyPolicy& policy, double gamma,
                                std::optional<std::size_t> max_steps) {
  require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  const std::size_t limit = max_steps.value_or(env.spec().max_episode_steps);
  ObjectiveVector total(env.spec().num_objectives, 0.0);
  double discount = 1.0;

  std::size_t state = env.reset();
  for (std::size_t t = 0; t < limit; ++t) {
    StepOutcome out = env.step(policy(state));
    for (std::size_t o = 0; o < total.size(); ++o) total[o] += discount * out.reward[o];
    if (out.terminated || out.truncated) break;
    discount *= gamma;
    state = out.next_state;
  }
  return total;
}

std::vector<std::size_t> evaluation_schedule(std::size_t total, std::size_t interval) {
  require(interval > 0, "evaluation interval must be positive");
  std::vector<std::size_t> steps{0};
  for (std::size_t t = interval; t < total; t += interval) steps.push_back(t);
  if (total > 0) steps.push_back(total);
  return steps;
}

}  // namespace morl
