// morl: train, sweep and score tabular multi-objective RL agents.

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/core.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include "morl/config.hpp"
#include "morl/error.hpp"
#include "morl/io.hpp"
#include "morl/pareto.hpp"
#include "morl/sweep.hpp"

namespace fs = std::filesystem;
using namespace morl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct SettingFlag {
  const char* flag;
  const char* section;
  const char* key;
  const char* help;
};

// Flags that override config-file settings, shared by train and sweep.
constexpr SettingFlag kSettingFlags[] = {
    {"--env", "env", "name", "Environment: dst-concave or four-room"},
    {"--map", "env", "map", "Map file replacing the bundled layout"},
    {"--max-episode-steps", "env", "max_episode_steps", "Episode truncation limit"},
    {"--algo", "agent", "algo", "Algorithm: moq or pql"},
    {"--scalariser", "agent", "scalariser", "MOQ scalariser: linear or chebyshev"},
    {"--weights", "agent", "weights", "Weight vector for train, e.g. 0.3,0.7"},
    {"--gamma", "agent", "gamma", "Discount factor"},
    {"--alpha", "agent", "alpha", "MOQ learning rate"},
    {"--tau", "agent", "tau", "Chebyshev utopian offset"},
    {"--steps", "agent", "steps", "Training timesteps per configuration"},
    {"--eps-initial", "agent", "eps_initial", "Initial exploration rate"},
    {"--eps-final", "agent", "eps_final", "Final exploration rate"},
    {"--eps-decay", "agent", "eps_decay", "Fraction of training over which epsilon decays"},
    {"--set-eval", "agent", "set_eval", "PQL action selection: hypervolume, cardinality or pareto"},
    {"--ref-point", "agent", "ref_point", "PQL hypervolume reference point"},
    {"--state-cap", "agent", "state_cap", "PQL limit on state-action pairs"},
    {"--seeds,--seed", "sweep", "seeds", "Seeds: 42, 42..51 or 42,45,47"},
    {"--workers", "sweep", "workers", "Parallel work items"},
    {"--weight-step", "sweep", "weight_step", "Weight grid step"},
    {"--grid-size", "sweep", "grid_size", "Evenly subsample the weight grid to this many vectors"},
    {"--eval-interval", "sweep", "eval_interval", "Timesteps between evaluations"},
    {"--ref", "sweep", "ref", "Metric reference point"},
    {"--truth", "sweep", "truth", "Reference front: auto, none or a points file"},
    {"--name", "sweep", "name", "Run name under runs/"},
};

struct RunOptions {
  std::string config_path;
  bool archive = false;
  bool quiet = false;
  std::deque<std::string> values{std::size(kSettingFlags)};
  std::vector<CLI::Option*> options;
};

void add_run_options(CLI::App& cmd, RunOptions& opts) {
  cmd.add_option("--config", opts.config_path, "Config file ([env], [agent], [sweep] sections)");
  for (std::size_t i = 0; i < std::size(kSettingFlags); ++i) {
    opts.options.push_back(cmd.add_option(kSettingFlags[i].flag, opts.values[i], kSettingFlags[i].help));
  }
  cmd.add_flag("--archive", opts.archive, "Accumulate fronts across evaluations instead of snapshots");
  cmd.add_flag("-q,--quiet", opts.quiet, "No progress output");
}

Settings collect_settings(const RunOptions& opts) {
  Settings settings = opts.config_path.empty() ? Settings{} : Settings::load(opts.config_path);
  Settings overrides;
  for (std::size_t i = 0; i < std::size(kSettingFlags); ++i) {
    if (opts.options[i]->count() > 0) {
      overrides.set(kSettingFlags[i].section, kSettingFlags[i].key, opts.values[i]);
    }
  }
  if (opts.archive) overrides.set("sweep", "archive", "true");
  settings.merge(overrides);
  return settings;
}

std::string utc_timestamp() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr)));
}

int run(const RunOptions& opts, RunKind kind, const CLI::App& cmd) {
  const Settings settings = collect_settings(opts);
  if (!settings.has("env", "name")) {
    fmt::print(stderr, "error: no environment given (--env or [env] name)\n\n{}", cmd.help());
    return kExitUsage;
  }
  const RunPlan plan = resolve_run(settings, kind);

  ProgressCallback progress;
  if (!opts.quiet) {
    progress = [](std::size_t done, std::size_t total) {
      fmt::print(stderr, "\r[{}/{}] configurations trained", done, total);
      if (done == total) fmt::print(stderr, "\n");
    };
  }
  const SweepResult result = run_sweep(plan.sweep, progress);

  const fs::path dir = run_directory(results_root(), plan.sweep.name);
  write_run(dir, plan, result, utc_timestamp());

  const AggregateSample& last = result.aggregate.back();
  fmt::print("{} on {}: {} seed(s), {} configuration(s)\n", plan.algorithm_label,
             plan.environment_label, result.seeds.size(),
             result.weights.empty() ? std::size_t{1} : result.weights.size());
  fmt::print("final t={}: hypervolume {} (sd {}), cardinality {}, sparsity {}", last.timestep,
             format_real(last.hypervolume.mean), format_real(last.hypervolume.sd),
             format_real(last.cardinality.mean), format_real(last.sparsity.mean));
  if (last.igd) fmt::print(", igd {}", format_real(last.igd->mean));
  fmt::print("\nresults written to {}\n", dir.string());
  return kExitOk;
}

struct MetricsOptions {
  std::string front_path;
  std::string truth_path;
  std::string ref;
  bool nd_filter = false;
};

int run_metrics(const MetricsOptions& opts) {
  PointSet points = read_points_file(opts.front_path);
  if (opts.nd_filter && !points.empty()) points = nondominated_filter(points).points();

  const std::vector<double> ref = parse_real_list(opts.ref, "--ref");
  if (!points.empty() && points.front().size() != ref.size()) {
    throw ConfigError("reference point has " + std::to_string(ref.size()) +
                      " coordinates but the points have " + std::to_string(points.front().size()));
  }

  fmt::print("hypervolume {}\n", format_real(hypervolume(points, ref)));
  fmt::print("cardinality {}\n", cardinality(points));
  fmt::print("sparsity {}\n", format_real(sparsity(points)));
  if (!opts.truth_path.empty()) {
    const PointSet truth = read_points_file(opts.truth_path);
    const auto value = truth.empty() ? std::nullopt : igd(points, truth);
    fmt::print("igd {}\n", value ? format_real(*value) : std::string("undefined"));
  }
  return kExitOk;
}

int run_plotdata(const std::string& run_dir, const std::string& out_dir) {
  const fs::path out = out_dir.empty() ? fs::path(run_dir) / "plots" : fs::path(out_dir);
  for (const auto& path : write_plot_data(run_dir, out)) fmt::print("{}\n", path.string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular multi-objective reinforcement learning baselines"};
  app.require_subcommand(1);

  RunOptions train_opts;
  auto* train = app.add_subcommand("train", "Train one configuration per seed");
  add_run_options(*train, train_opts);

  RunOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Outer-loop weight sweep (or one PQL run) per seed");
  add_run_options(*sweep, sweep_opts);

  MetricsOptions metrics_opts;
  auto* metrics = app.add_subcommand("metrics", "Indicator values of a points file");
  metrics->add_option("front", metrics_opts.front_path, "Points file")->required();
  metrics->add_option("--ref", metrics_opts.ref, "Hypervolume reference point, e.g. 0,-50")->required();
  metrics->add_option("--truth", metrics_opts.truth_path, "Reference front for IGD");
  metrics->add_flag("--nd-filter", metrics_opts.nd_filter, "Drop dominated points first");

  std::string plot_run_dir;
  std::string plot_out_dir;
  auto* plotdata = app.add_subcommand("plotdata", "Plot-ready CSV curves and final front of a run");
  plotdata->add_option("run_dir", plot_run_dir, "Run directory (runs/<name>)")->required();
  plotdata->add_option("--out", plot_out_dir, "Output directory (default <run_dir>/plots)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return run(train_opts, RunKind::Train, *train);
    if (*sweep) return run(sweep_opts, RunKind::Sweep, *sweep);
    if (*metrics) return run_metrics(metrics_opts);
    if (*plotdata) return run_plotdata(plot_run_dir, plot_out_dir);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const ContractViolation& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const CapacityError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
