#include "morl/pql_agent.hpp"

#include <algorithm>

#include "morl/error.hpp"

namespace morl {

SetEvalMode parse_set_eval(std::string_view token) {
  if (token == "hypervolume") return SetEvalMode::Hypervolume;
  if (token == "cardinality") return SetEvalMode::Cardinality;
  if (token == "pareto") return SetEvalMode::Pareto;
  throw ContractViolation("unknown set evaluation '" + std::string(token) +
                          "' (expected hypervolume, cardinality or pareto)");
}

std::string to_string(SetEvalMode mode) {
  switch (mode) {
    case SetEvalMode::Hypervolume: return "hypervolume";
    case SetEvalMode::Cardinality: return "cardinality";
    case SetEvalMode::Pareto: return "pareto";
  }
  return "?";
}

void SetEvaluation::validate() const {
  require(ref.has_value() == (mode == SetEvalMode::Hypervolume),
          "a reference point is required exactly when set_eval = hypervolume");
}

std::vector<double> evaluate_action_sets(std::span<const ParetoArchive> action_sets,
                                         const SetEvaluation& eval) {
  eval.validate();
  std::vector<double> scores(action_sets.size(), 0.0);
  if (eval.mode == SetEvalMode::Hypervolume) {
    for (std::size_t a = 0; a < action_sets.size(); ++a) {
      scores[a] = hypervolume(action_sets[a], *eval.ref);
    }
    return scores;
  }

  std::vector<ObjectiveVector> all;
  for (const auto& set : action_sets) all.insert(all.end(), set.begin(), set.end());
  const ParetoArchive combined = nondominated_filter(all);
  for (std::size_t a = 0; a < action_sets.size(); ++a) {
    const auto survivors = std::count_if(action_sets[a].begin(), action_sets[a].end(),
                                         [&](const ObjectiveVector& p) { return combined.contains(p); });
    scores[a] = eval.mode == SetEvalMode::Cardinality ? static_cast<double>(survivors)
                                                      : (survivors > 0 ? 1.0 : 0.0);
  }
  return scores;
}

// ---------------------------------------------------------------------------

QSetStore::QSetStore(std::size_t states, std::size_t actions, std::size_t objectives)
    : states_(states),
      actions_(actions),
      objectives_(objectives),
      visits_(states * actions, 0),
      mean_reward_(states * actions * objectives, 0.0),
      future_(states * actions, ParetoArchive(objectives)) {
  require(states > 0 && actions > 0 && objectives > 0, "Q-set store dimensions must be positive");
}

std::size_t QSetStore::index(std::size_t state, std::size_t action) const {
  require(state < states_ && action < actions_, "Q-set index out of range");
  return state * actions_ + action;
}

std::size_t QSetStore::visits(std::size_t state, std::size_t action) const {
  return visits_[index(state, action)];
}

std::span<const double> QSetStore::mean_reward(std::size_t state, std::size_t action) const {
  return std::span<const double>(mean_reward_).subspan(index(state, action) * objectives_,
                                                       objectives_);
}

const ParetoArchive& QSetStore::future_front(std::size_t state, std::size_t action) const {
  return future_[index(state, action)];
}

ParetoArchive QSetStore::qset(std::size_t state, std::size_t action, double gamma) const {
  const std::size_t i = index(state, action);
  ParetoArchive out(objectives_);
  if (visits_[i] == 0) return out;
  const auto mean = mean_reward(state, action);
  if (future_[i].empty()) {
    out.insert(ObjectiveVector(mean.begin(), mean.end()));
    return out;
  }
  // An increasing affine map keeps the set non-dominated and ordered.
  for (const auto& v : future_[i]) {
    ObjectiveVector q(objectives_);
    for (std::size_t o = 0; o < objectives_; ++o) q[o] = mean[o] + gamma * v[o];
    out.insert(q);
  }
  return out;
}

void QSetStore::update(std::size_t state, std::size_t action, std::span<const double> reward,
                       std::size_t next_state, bool terminated, double gamma) {
  require(reward.size() == objectives_, "reward dimension mismatch");
  const std::size_t i = index(state, action);
  const std::size_t n = ++visits_[i];
  double* mean = mean_reward_.data() + i * objectives_;
  for (std::size_t o = 0; o < objectives_; ++o) {
    mean[o] += (reward[o] - mean[o]) / static_cast<double>(n);
  }
  future_[i] = terminated ? ParetoArchive(objectives_) : pql_front(*this, next_state, gamma);
}

ParetoArchive pql_front(const QSetStore& store, std::size_t state, double gamma) {
  std::vector<ObjectiveVector> all;
  for (std::size_t a = 0; a < store.actions(); ++a) {
    const ParetoArchive set = store.qset(state, a, gamma);
    all.insert(all.end(), set.begin(), set.end());
  }
  if (all.empty()) return ParetoArchive(store.objectives());
  return nondominated_filter(all);
}

// ---------------------------------------------------------------------------

void PqlConfig::validate(std::size_t num_objectives) const {
  require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  require(eval_interval > 0, "eval_interval must be positive");
  epsilon.validate();
  set_eval.validate();
  if (set_eval.ref) {
    require(set_eval.ref->size() == num_objectives, "ref_point length differs from the objective count");
  }
}

void check_pql_capacity(const EnvSpec& spec, std::size_t state_cap) {
  const std::size_t pairs = spec.state_count * spec.action_count;
  if (pairs > state_cap) {
    throw CapacityError("Pareto Q-learning does not scale to " + spec.name + ": " +
                        std::to_string(pairs) + " state-action pairs exceed the cap of " +
                        std::to_string(state_cap) +
                        " (raise state_cap to force it, at the cost of memory and time)");
  }
}

namespace {

std::size_t capped_state_count(const EnvSpec& spec, std::size_t state_cap) {
  check_pql_capacity(spec, state_cap);
  return spec.state_count;
}

}  // namespace

PqlAgent::PqlAgent(const EnvSpec& spec, PqlConfig config, Rng rng)
    : config_(std::move(config)),
      store_(capped_state_count(spec, config_.state_cap), spec.action_count, spec.num_objectives),
      rng_(rng) {
  config_.validate(spec.num_objectives);
}

std::size_t PqlAgent::act(std::size_t state, double epsilon) {
  const std::size_t n = store_.actions();
  if (rng_.uniform01() < epsilon) return rng_.uniform_index(n);

  std::vector<ParetoArchive> sets;
  sets.reserve(n);
  for (std::size_t a = 0; a < n; ++a) sets.push_back(store_.qset(state, a, config_.gamma));
  const auto scores = evaluate_action_sets(sets, config_.set_eval);

  const double best = *std::max_element(scores.begin(), scores.end());
  std::vector<std::size_t> ties;
  for (std::size_t a = 0; a < n; ++a) {
    if (scores[a] == best) ties.push_back(a);
  }
  return ties.size() == 1 ? ties.front() : ties[rng_.uniform_index(ties.size())];
}

void PqlAgent::update(std::size_t state, std::size_t action, std::span<const double> reward,
                      std::size_t next_state, bool terminated) {
  store_.update(state, action, reward, next_state, terminated, config_.gamma);
}

PqlRun train_pql(const Environment& env_prototype, const PqlConfig& config, std::uint64_t seed) {
  auto env = env_prototype.clone();
  const EnvSpec& spec = env->spec();
  PqlAgent agent(spec, config, Rng::derive(seed, 0));
  const std::size_t start = env->start_state();

  const auto schedule = evaluation_schedule(config.total_timesteps, config.eval_interval);
  ApproximationSetTimeline timeline;
  timeline.reserve(schedule.size());
  std::size_t next_eval = 0;
  timeline.push_back({schedule[next_eval++], agent.front(start)});

  std::size_t state = env->reset();
  for (std::size_t t = 0; t < config.total_timesteps; ++t) {
    const double epsilon = config.epsilon.at(t, config.total_timesteps);
    const std::size_t action = agent.act(state, epsilon);
    StepOutcome out = env->step(action);
    agent.update(state, action, out.reward, out.next_state, out.terminated);
    state = (out.terminated || out.truncated) ? env->reset() : out.next_state;

    if (next_eval < schedule.size() && t + 1 == schedule[next_eval]) {
      timeline.push_back({schedule[next_eval++], agent.front(start)});
    }
  }
  return PqlRun{agent.store(), std::move(timeline)};
}

}  // namespace morl
