// Shared fixtures and reference implementations for the test suites. The
// reference implementations are deliberately naive so they can be trusted
// by inspection.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "morl/environment.hpp"
#include "morl/pareto.hpp"
#include "morl/random.hpp"

namespace morl::testing {

/// Deterministic MOMDP given as an explicit transition table.
class TableMdp final : public Environment {
 public:
  TableMdp(std::size_t states, std::size_t actions, std::size_t objectives,
           std::size_t max_steps = kDefaultMaxEpisodeSteps)
      : table_(states * actions) {
    spec_.name = "table-mdp";
    spec_.num_objectives = objectives;
    spec_.action_count = actions;
    spec_.state_count = states;
    spec_.max_episode_steps = max_steps;
  }

  void set(std::size_t state, std::size_t action, Transition t) {
    table_[state * spec_.action_count + action] = std::move(t);
  }

  const EnvSpec& spec() const override { return spec_; }
  std::size_t start_state() const override { return 0; }
  Transition transition(std::size_t state, std::size_t action) const override {
    return table_.at(state * spec_.action_count + action);
  }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<TableMdp>(*this); }

 private:
  EnvSpec spec_;
  std::vector<Transition> table_;
};

/// Each state offers "take the treasure here" or "go one deeper".
inline TableMdp treasure_chain() {
  TableMdp mdp(3, 2, 2);
  mdp.set(0, 0, {0, {1, -1}, true});
  mdp.set(0, 1, {1, {0, -1}, false});
  mdp.set(1, 0, {1, {3, -1}, true});
  mdp.set(1, 1, {2, {0, -1}, false});
  mdp.set(2, 0, {2, {10, -1}, true});
  mdp.set(2, 1, {2, {0, -1}, true});
  return mdp;
}

/// Three states, two actions, with a cycle and one terminal exit per state.
inline TableMdp three_state_loop() {
  TableMdp mdp(3, 2, 1, 25);
  mdp.set(0, 0, {1, {-1}, false});
  mdp.set(0, 1, {0, {2}, true});
  mdp.set(1, 0, {2, {-1}, false});
  mdp.set(1, 1, {0, {0}, false});
  mdp.set(2, 0, {0, {-2}, false});
  mdp.set(2, 1, {2, {5}, true});
  return mdp;
}

/// Random acyclic MDP: every action moves to a strictly later state or
/// ends the episode, with integer rewards in [-3, 3].
inline TableMdp random_dag(std::size_t states, std::size_t actions, std::size_t objectives,
                           std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> reward(-3, 3);
  TableMdp mdp(states, actions, objectives);
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t a = 0; a < actions; ++a) {
      Transition t;
      for (std::size_t o = 0; o < objectives; ++o) t.reward.push_back(reward(gen));
      const std::size_t remaining = states - s - 1;
      if (remaining == 0 || gen() % 4 == 0) {
        t.terminal = true;
        t.next_state = s;
      } else {
        t.next_state = s + 1 + gen() % remaining;
      }
      mdp.set(s, a, t);
    }
  }
  return mdp;
}

// ---- Pareto dominance -----------------------------------------------------

inline bool naive_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly = true;
  }
  return strictly;
}

/// O(n^2) pairwise filter; result is sorted and duplicate-free.
inline std::vector<ObjectiveVector> brute_force_nd(const std::vector<ObjectiveVector>& points) {
  std::set<ObjectiveVector> kept;
  for (const auto& p : points) {
    const bool dominated = std::any_of(points.begin(), points.end(),
                                       [&](const ObjectiveVector& q) { return naive_dominates(q, p); });
    if (!dominated) kept.insert(p);
  }
  return {kept.begin(), kept.end()};
}

// ---- hypervolume ----------------------------------------------------------

/// Inclusion-exclusion over every non-empty subset of boxes.
inline double inclusion_exclusion_hv(const std::vector<ObjectiveVector>& points,
                                     const std::vector<double>& ref) {
  const std::size_t n = points.size();
  double total = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    double volume = 1.0;
    for (std::size_t o = 0; o < ref.size(); ++o) {
      double lo = INFINITY;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) lo = std::min(lo, points[i][o]);
      }
      volume *= std::max(0.0, lo - ref[o]);
    }
    total += (std::popcount(mask) % 2 == 1) ? volume : -volume;
  }
  return total;
}

struct MonteCarloEstimate {
  double value;
  double standard_error;
};

/// Uniform sampling of the bounding box [ref, max(points)].
inline MonteCarloEstimate monte_carlo_hv(const std::vector<ObjectiveVector>& points,
                                         const std::vector<double>& ref, std::size_t samples,
                                         std::uint64_t seed) {
  std::vector<double> hi(ref);
  for (const auto& p : points) {
    for (std::size_t o = 0; o < ref.size(); ++o) hi[o] = std::max(hi[o], p[o]);
  }
  double box = 1.0;
  for (std::size_t o = 0; o < ref.size(); ++o) box *= hi[o] - ref[o];

  Rng rng(seed);
  std::size_t hits = 0;
  std::vector<double> x(ref.size());
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t o = 0; o < ref.size(); ++o) x[o] = ref[o] + rng.uniform01() * (hi[o] - ref[o]);
    const bool covered = std::any_of(points.begin(), points.end(), [&](const ObjectiveVector& p) {
      for (std::size_t o = 0; o < ref.size(); ++o) {
        if (x[o] > p[o]) return false;
      }
      return true;
    });
    hits += covered;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

// ---- episode returns ------------------------------------------------------

/// Discounted return of every action sequence from the start state to a
/// terminal transition (depth-first; the MDP must be acyclic).
inline std::vector<ObjectiveVector> enumerate_returns(const Environment& env, double gamma) {
  const EnvSpec& spec = env.spec();
  std::vector<ObjectiveVector> out;
  std::function<void(std::size_t, ObjectiveVector, double)> walk =
      [&](std::size_t state, ObjectiveVector acc, double discount) {
        for (std::size_t a = 0; a < spec.action_count; ++a) {
          const Transition t = env.transition(state, a);
          ObjectiveVector next = acc;
          for (std::size_t o = 0; o < next.size(); ++o) next[o] += discount * t.reward[o];
          if (t.terminal) {
            out.push_back(next);
          } else {
            walk(t.next_state, next, discount * gamma);
          }
        }
      };
  walk(env.start_state(), ObjectiveVector(spec.num_objectives, 0.0), 1.0);
  return out;
}

inline bool approx_equal_sets(const std::vector<ObjectiveVector>& a,
                              const std::vector<ObjectiveVector>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t o = 0; o < a[i].size(); ++o) {
      if (std::abs(a[i][o] - b[i][o]) > tol) return false;
    }
  }
  return true;
}

// ---- scalar Q-learning ----------------------------------------------------

/// Textbook single-objective Q-learning with epsilon decaying linearly from
/// `eps0` to `eps1` over the run. Random draws follow the agent's protocol:
/// one uniform draw for exploration, then a uniform action or a uniform pick
/// among tied greedy actions in index order.
struct ScalarQLearning {
  std::vector<double> q;
  std::size_t actions;

  ScalarQLearning(std::size_t states, std::size_t actions_) : q(states * actions_, 0.0), actions(actions_) {}

  std::size_t argmax(std::size_t s, Rng& rng) const {
    double best = -INFINITY;
    std::vector<std::size_t> ties;
    for (std::size_t a = 0; a < actions; ++a) {
      const double v = q[s * actions + a];
      if (v > best) {
        best = v;
        ties = {a};
      } else if (v == best) {
        ties.push_back(a);
      }
    }
    return ties.size() == 1 ? ties[0] : ties[rng.uniform_index(ties.size())];
  }

  void train(Environment& env, double alpha, double gamma, double eps0, double eps1,
             std::size_t total, Rng rng) {
    std::size_t s = env.reset();
    for (std::size_t t = 0; t < total; ++t) {
      const double progress = static_cast<double>(t) / static_cast<double>(total);
      const double eps = eps0 + (eps1 - eps0) * progress;
      std::size_t a;
      if (rng.uniform01() < eps) {
        a = rng.uniform_index(actions);
      } else {
        a = argmax(s, rng);
      }
      const StepOutcome out = env.step(a);
      double target = out.reward[0];
      if (!out.terminated) target += gamma * q[out.next_state * actions + argmax(out.next_state, rng)];
      double& cell = q[s * actions + a];
      cell += alpha * (target - cell);
      s = (out.terminated || out.truncated) ? env.reset() : out.next_state;
    }
  }
};

}  // namespace morl::testing
