#include "morl/moq_agent.hpp"

#include <algorithm>
#include <cmath>

#include "morl/error.hpp"

namespace morl {

void EpsilonSchedule::validate() const {
  require(final_value >= 0.0 && final_value <= initial && initial <= 1.0,
          "epsilon schedule needs 0 <= eps_final <= eps_initial <= 1");
  require(decay_fraction >= 0.0 && decay_fraction <= 1.0, "eps_decay_fraction must lie in [0, 1]");
}

double EpsilonSchedule::at(std::size_t t, std::size_t total) const {
  require(t <= total, "epsilon_at: timestep beyond the run length");
  const double decay_steps = decay_fraction * static_cast<double>(total);
  if (decay_steps <= 0.0) return final_value;
  const double progress = std::min(1.0, static_cast<double>(t) / decay_steps);
  return initial + (final_value - initial) * progress;
}

void MoqConfig::validate(std::size_t num_objectives) const {
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  require(weights.size() == num_objectives, "weight vector length differs from the objective count");
  require(tau >= 0.0, "tau must be non-negative");
  require(eval_interval > 0, "eval_interval must be positive");
  epsilon.validate();
}

// ---------------------------------------------------------------------------

VectorQTable::VectorQTable(std::size_t states, std::size_t actions, std::size_t objectives)
    : states_(states),
      actions_(actions),
      objectives_(objectives),
      values_(states * actions * objectives, 0.0) {
  require(states > 0 && actions > 0 && objectives > 0, "Q-table dimensions must be positive");
}

QRow VectorQTable::row(std::size_t state) const {
  require(state < states_, "state id out of range");
  const std::size_t width = actions_ * objectives_;
  return QRow(std::span<const double>(values_).subspan(state * width, width), objectives_);
}

std::span<double> VectorQTable::at(std::size_t state, std::size_t action) {
  require(state < states_ && action < actions_, "Q-table index out of range");
  return std::span<double>(values_).subspan((state * actions_ + action) * objectives_, objectives_);
}

std::span<const double> VectorQTable::at(std::size_t state, std::size_t action) const {
  require(state < states_ && action < actions_, "Q-table index out of range");
  return std::span<const double>(values_).subspan((state * actions_ + action) * objectives_,
                                                  objectives_);
}

// ---------------------------------------------------------------------------

MoqAgent::MoqAgent(const EnvSpec& spec, MoqConfig config, Rng rng)
    : config_(std::move(config)),
      table_(spec.state_count, spec.action_count, spec.num_objectives),
      tracker_(spec.num_objectives, config_.tau),
      rng_(rng),
      action_count_(spec.action_count) {
  config_.validate(spec.num_objectives);
}

std::size_t MoqAgent::act(std::size_t state, double epsilon) {
  if (rng_.uniform01() < epsilon) return rng_.uniform_index(action_count_);
  return greedy(state);
}

std::size_t MoqAgent::greedy(std::size_t state) {
  const QRow row = table_.row(state);
  if (config_.scalariser == ScalariserKind::Chebyshev) {
    for (std::size_t a = 0; a < row.actions(); ++a) tracker_.update(row[a]);
  }
  return greedy_action(config_.scalariser, row, config_.weights, tracker_.utopian(), rng_);
}

std::size_t MoqAgent::greedy_for_evaluation(std::size_t state, Rng& rng) const {
  const QRow row = table_.row(state);
  if (config_.scalariser == ScalariserKind::Linear) {
    return greedy_action(config_.scalariser, row, config_.weights, {}, rng);
  }
  UtopianTracker local = tracker_;
  for (std::size_t a = 0; a < row.actions(); ++a) local.update(row[a]);
  return greedy_action(config_.scalariser, row, config_.weights, local.utopian(), rng);
}

void MoqAgent::update(std::size_t state, std::size_t action, std::span<const double> reward,
                      std::size_t next_state, bool terminated) {
  require(reward.size() == table_.objectives(), "reward dimension mismatch");
  std::span<const double> next;
  if (!terminated) next = table_.at(next_state, greedy(next_state));

  auto q = table_.at(state, action);
  const double alpha = config_.alpha;
  const double gamma = config_.gamma;
  for (std::size_t o = 0; o < q.size(); ++o) {
    const double bootstrap = terminated ? 0.0 : next[o];
    q[o] += alpha * (reward[o] + gamma * bootstrap - q[o]);
  }
}

// ---------------------------------------------------------------------------

MoqRun train_moq(const Environment& env_prototype, const MoqConfig& config, std::uint64_t seed) {
  auto env = env_prototype.clone();
  auto eval_env = env_prototype.clone();
  const EnvSpec& spec = env->spec();
  MoqAgent agent(spec, config, Rng::derive(seed, 0));
  Rng eval_rng = Rng::derive(seed, 1);

  const auto schedule = evaluation_schedule(config.total_timesteps, config.eval_interval);
  std::vector<EvaluatedReturn> timeline;
  timeline.reserve(schedule.size());
  auto evaluate = [&](std::size_t t) {
    GreedyPolicy policy = [&](std::size_t s) { return agent.greedy_for_evaluation(s, eval_rng); };
    timeline.push_back({t, evaluate_policy(*eval_env, policy, config.gamma)});
  };

  std::size_t next_eval = 0;
  evaluate(schedule[next_eval++]);

  std::size_t state = env->reset();
  for (std::size_t t = 0; t < config.total_timesteps; ++t) {
    const double epsilon = config.epsilon.at(t, config.total_timesteps);
    const std::size_t action = agent.act(state, epsilon);
    StepOutcome out = env->step(action);
    agent.update(state, action, out.reward, out.next_state, out.terminated);
    state = (out.terminated || out.truncated) ? env->reset() : out.next_state;

    if (next_eval < schedule.size() && t + 1 == schedule[next_eval]) evaluate(schedule[next_eval++]);
  }

  return MoqRun{agent.table(), std::move(timeline)};
}

}  // namespace morl
