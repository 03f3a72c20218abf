#include "morl/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "morl/error.hpp"
#include "morl/random.hpp"

namespace morl {

Algorithm parse_algorithm(std::string_view token) {
  if (token == "moq") return Algorithm::Moq;
  if (token == "pql") return Algorithm::Pql;
  throw ContractViolation("unknown algorithm '" + std::string(token) + "' (expected moq or pql)");
}

std::string to_string(Algorithm algorithm) { return algorithm == Algorithm::Moq ? "moq" : "pql"; }

namespace {

void compositions(std::size_t parts, std::size_t total, std::vector<std::size_t>& prefix,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::size_t first = 0; first <= total; ++first) {
    prefix.push_back(first);
    compositions(parts - 1, total - first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<WeightVector> weight_grid(std::size_t objectives, double step) {
  require(objectives >= 1, "weight_grid: at least one objective is required");
  require(step > 0.0 && step <= 1.0, "weight_grid: step must lie in (0, 1]");
  const double divisions = std::round(1.0 / step);
  require(std::abs(divisions * step - 1.0) <= 1e-9, "weight_grid: step must divide 1");
  const auto k = static_cast<std::size_t>(divisions);

  std::vector<std::vector<std::size_t>> parts;
  std::vector<std::size_t> prefix;
  compositions(objectives, k, prefix, parts);

  std::vector<WeightVector> grid;
  grid.reserve(parts.size());
  for (const auto& p : parts) {
    std::vector<double> w(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) w[i] = static_cast<double>(p[i]) / divisions;
    grid.emplace_back(std::move(w));
  }
  return grid;
}

std::vector<WeightVector> subsample_grid(std::span<const WeightVector> grid, std::size_t count) {
  require(count > 0, "subsample_grid: count must be positive");
  if (count >= grid.size()) return {grid.begin(), grid.end()};
  std::vector<WeightVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(grid[i * grid.size() / count]);
  return out;
}

MetricTimeline compute_metrics(const ApproximationSetTimeline& fronts, std::span<const double> ref,
                               const std::optional<PointSet>& truth) {
  MetricTimeline out;
  out.reserve(fronts.size());
  for (const auto& snap : fronts) {
    MetricSample m;
    m.timestep = snap.timestep;
    m.hypervolume = hypervolume(snap.front, ref);
    m.sparsity = sparsity(snap.front);
    m.cardinality = cardinality(snap.front);
    if (truth && !truth->empty()) m.igd = igd(snap.front, *truth);
    out.push_back(m);
  }
  return out;
}

AggregateTimeline aggregate_seeds(std::span<const MetricTimeline> per_seed) {
  require(!per_seed.empty(), "aggregate_seeds: no timelines given");
  const std::size_t length = per_seed.front().size();
  for (const auto& tl : per_seed) {
    require(tl.size() == length, "aggregate_seeds: timelines have different lengths");
    for (std::size_t k = 0; k < length; ++k) {
      require(tl[k].timestep == per_seed.front()[k].timestep,
              "aggregate_seeds: timelines are not aligned on timesteps");
    }
  }

  auto stat = [&](std::size_t k, auto&& value) {
    double sum = 0.0;
    for (const auto& tl : per_seed) sum += value(tl[k]);
    const double mean = sum / static_cast<double>(per_seed.size());
    double sq = 0.0;
    for (const auto& tl : per_seed) sq += (value(tl[k]) - mean) * (value(tl[k]) - mean);
    return Stat{mean, std::sqrt(sq / static_cast<double>(per_seed.size()))};
  };

  AggregateTimeline out(length);
  for (std::size_t k = 0; k < length; ++k) {
    out[k].timestep = per_seed.front()[k].timestep;
    out[k].hypervolume = stat(k, [](const MetricSample& m) { return m.hypervolume; });
    out[k].sparsity = stat(k, [](const MetricSample& m) { return m.sparsity; });
    out[k].cardinality =
        stat(k, [](const MetricSample& m) { return static_cast<double>(m.cardinality); });
    const bool all_igd = std::all_of(per_seed.begin(), per_seed.end(),
                                     [&](const MetricTimeline& tl) { return tl[k].igd.has_value(); });
    if (all_igd) out[k].igd = stat(k, [](const MetricSample& m) { return *m.igd; });
  }
  return out;
}

ApproximationSetTimeline pool_returns(std::span<const std::vector<EvaluatedReturn>> per_config,
                                      bool cumulative) {
  require(!per_config.empty(), "pool_returns: no configurations");
  const std::size_t length = per_config.front().size();
  for (const auto& c : per_config) require(c.size() == length, "pool_returns: ragged timelines");

  ApproximationSetTimeline out;
  out.reserve(length);
  std::vector<ObjectiveVector> pool;
  for (std::size_t k = 0; k < length; ++k) {
    const std::size_t t = per_config.front()[k].timestep;
    if (cumulative && !out.empty()) {
      pool.assign(out.back().front.begin(), out.back().front.end());
    } else {
      pool.clear();
    }
    for (const auto& c : per_config) {
      require(c[k].timestep == t, "pool_returns: timelines are not aligned on timesteps");
      pool.push_back(c[k].value);
    }
    out.push_back({t, nondominated_filter(pool)});
  }
  return out;
}

// ---------------------------------------------------------------------------

void validate_sweep(const SweepConfig& config) {
  require(!config.seeds.empty(), "a sweep needs at least one seed");
  require(config.eval_interval > 0, "eval_interval must be positive");
  require(config.workers > 0, "workers must be positive");
  auto env = make_environment(config.env);
  const EnvSpec& spec = env->spec();
  require(config.ref.size() == spec.num_objectives, "reference point length differs from the objective count");

  if (config.algorithm == Algorithm::Pql) {
    check_pql_capacity(spec, config.pql.state_cap);
    PqlConfig pql = config.pql;
    pql.eval_interval = config.eval_interval;
    pql.validate(spec.num_objectives);
  } else {
    MoqConfig moq = config.moq;
    moq.eval_interval = config.eval_interval;
    if (config.weights) {
      require(!config.weights->empty(), "the explicit weight list is empty");
      for (const auto& w : *config.weights) {
        moq.weights = w;
        moq.validate(spec.num_objectives);
      }
    } else {
      moq.weights = weight_grid(spec.num_objectives, config.weight_step).front();
      moq.validate(spec.num_objectives);
    }
  }
}

SweepResult run_sweep(const SweepConfig& config, const ProgressCallback& progress) {
  validate_sweep(config);
  const auto env = make_environment(config.env);
  const EnvSpec& spec = env->spec();

  SweepResult result;
  if (config.algorithm == Algorithm::Moq && config.weights) {
    result.weights = *config.weights;
  } else if (config.algorithm == Algorithm::Moq) {
    result.weights = weight_grid(spec.num_objectives, config.weight_step);
    if (config.grid_size) result.weights = subsample_grid(result.weights, *config.grid_size);
  }
  const std::size_t per_seed = config.algorithm == Algorithm::Moq ? result.weights.size() : 1;
  const std::size_t total = per_seed * config.seeds.size();

  result.seeds.resize(config.seeds.size());
  for (std::size_t s = 0; s < config.seeds.size(); ++s) {
    result.seeds[s].seed = config.seeds[s];
    if (config.algorithm == Algorithm::Moq) result.seeds[s].config_returns.resize(per_seed);
  }

  // Work item i trains configuration (i % per_seed) under seed (i / per_seed)
  // and writes only to its own slot.
  auto run_item = [&](std::size_t item) {
    const std::size_t s = item / per_seed;
    const std::size_t c = item % per_seed;
    const std::uint64_t seed = config.seeds[s];
    SeedResult& slot = result.seeds[s];
    if (config.algorithm == Algorithm::Moq) {
      MoqConfig moq = config.moq;
      moq.weights = result.weights[c];
      moq.eval_interval = config.eval_interval;
      slot.config_returns[c] = train_moq(*env, moq, derive_seed(seed, c)).timeline;
    } else {
      PqlConfig pql = config.pql;
      pql.eval_interval = config.eval_interval;
      slot.fronts = train_pql(*env, pql, seed).timeline;
    }
  };

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t item = next++; item < total; item = next++) {
      try {
        run_item(item);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(failure_mutex);
        progress(finished, total);
      }
    }
  };

  const std::size_t threads = std::min(config.workers, total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<MetricTimeline> timelines;
  for (auto& seed_result : result.seeds) {
    if (config.algorithm == Algorithm::Moq) {
      seed_result.fronts = pool_returns(seed_result.config_returns, config.cumulative_archive);
    } else if (config.cumulative_archive) {
      for (std::size_t k = 1; k < seed_result.fronts.size(); ++k) {
        std::vector<ObjectiveVector> merged(seed_result.fronts[k - 1].front.begin(),
                                            seed_result.fronts[k - 1].front.end());
        merged.insert(merged.end(), seed_result.fronts[k].front.begin(),
                      seed_result.fronts[k].front.end());
        if (!merged.empty()) seed_result.fronts[k].front = nondominated_filter(merged);
      }
    }
    seed_result.metrics = compute_metrics(seed_result.fronts, config.ref, config.truth);
    timelines.push_back(seed_result.metrics);
  }
  result.aggregate = aggregate_seeds(timelines);
  return result;
}

}  // namespace morl
