#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morl/environment.hpp"
#include "morl/evaluation.hpp"
#include "morl/moq_agent.hpp"
#include "morl/pareto.hpp"
#include "morl/pql_agent.hpp"
#include "morl/scalarisation.hpp"

namespace morl {

enum class Algorithm { Moq, Pql };

Algorithm parse_algorithm(std::string_view token);
std::string to_string(Algorithm algorithm);

/// Every weight vector of `objectives` non-negative multiples of `step`
/// summing to one, in lexicographic order. `step` must divide 1.
std::vector<WeightVector> weight_grid(std::size_t objectives, double step);

/// `count` evenly spaced entries of `grid` (all of it when count >= size).
std::vector<WeightVector> subsample_grid(std::span<const WeightVector> grid, std::size_t count);

struct SweepConfig {
  std::string name;
  EnvConfig env;
  Algorithm algorithm = Algorithm::Moq;
  MoqConfig moq;  // weights are replaced per grid point
  PqlConfig pql;
  double weight_step = 0.1;
  std::optional<std::size_t> grid_size;  // subsample the weight grid
  // Explicit weight vectors used instead of the grid.
  std::optional<std::vector<WeightVector>> weights;
  std::size_t eval_interval = 1000;
  std::vector<std::uint64_t> seeds{42};
  ObjectiveVector ref;
  std::optional<PointSet> truth;
  // Accumulate every evaluated return instead of taking per-iteration
  // snapshots.
  bool cumulative_archive = false;
  std::size_t workers = 1;
};

struct MetricSample {
  std::size_t timestep = 0;
  double hypervolume = 0.0;
  double sparsity = 0.0;
  std::size_t cardinality = 0;
  std::optional<double> igd;
};

using MetricTimeline = std::vector<MetricSample>;

struct Stat {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
};

struct AggregateSample {
  std::size_t timestep = 0;
  Stat hypervolume;
  Stat sparsity;
  Stat cardinality;
  std::optional<Stat> igd;  // present only when every seed defines IGD
};

using AggregateTimeline = std::vector<AggregateSample>;

/// Indicator values of each snapshot. IGD is computed only against a
/// non-empty `truth`.
MetricTimeline compute_metrics(const ApproximationSetTimeline& fronts, std::span<const double> ref,
                               const std::optional<PointSet>& truth);

/// Pointwise mean and standard deviation over seeds. All timelines must share
/// the same timesteps.
AggregateTimeline aggregate_seeds(std::span<const MetricTimeline> per_seed);

/// Pools the evaluated returns of every configuration into one
/// non-dominated set per evaluation iteration. In snapshot mode each set
/// holds only that iteration's returns; in cumulative mode it also keeps
/// everything found earlier.
ApproximationSetTimeline pool_returns(std::span<const std::vector<EvaluatedReturn>> per_config,
                                      bool cumulative);

struct SeedResult {
  std::uint64_t seed = 0;
  // Evaluated greedy returns per weight configuration (outer-loop only).
  std::vector<std::vector<EvaluatedReturn>> config_returns;
  ApproximationSetTimeline fronts;
  MetricTimeline metrics;
};

struct SweepResult {
  std::vector<WeightVector> weights;  // empty for Pareto Q-learning
  std::vector<SeedResult> seeds;
  AggregateTimeline aggregate;
};

/// Number of work items finished so far out of the total.
using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Fails fast (before any training) when the algorithm cannot run on the
/// environment or the configuration is invalid.
void validate_sweep(const SweepConfig& config);

/// Outer-loop protocol for MO Q-learning (one run per weight vector and
/// seed) or a single inner-loop run per seed for Pareto Q-learning. Work
/// items run on `config.workers` threads; results do not depend on the
/// worker count or completion order.
SweepResult run_sweep(const SweepConfig& config, const ProgressCallback& progress = {});

}  // namespace morl
