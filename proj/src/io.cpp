#include "morl/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "morl/error.hpp"

namespace morl {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(line ? source + ":" + std::to_string(line) + ": " + message
                              : source + ": " + message),
      line_(line) {}

std::string_view artifact_version() { return "1.0.0"; }

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

bool is_blank_or_comment(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

PointSet read_points(std::istream& in, std::string_view source) {
  std::vector<ObjectiveVector> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    std::istringstream fields(line);
    ObjectiveVector p;
    std::string token;
    while (fields >> token) {
      try {
        p.push_back(parse_real(token, "coordinate"));
      } catch (const ConfigError&) {
        throw ParseError(std::string(source), line_no, "malformed coordinate '" + token + "'");
      }
      if (!std::isfinite(p.back())) {
        throw ParseError(std::string(source), line_no, "non-finite coordinate '" + token + "'");
      }
    }
    if (!points.empty() && p.size() != points.front().size()) {
      throw ParseError(std::string(source), line_no,
                       "expected " + std::to_string(points.front().size()) + " coordinates, found " +
                           std::to_string(p.size()));
    }
    points.push_back(std::move(p));
  }
  return make_point_set(std::move(points));
}

PointSet read_points_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_points(in, path.string());
}

void write_points(std::ostream& out, std::span<const ObjectiveVector> points) {
  for (const auto& p : points) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out << ' ';
      out << format_real(p[i]);
    }
    out << '\n';
  }
}

void write_points_file(const std::filesystem::path& path, std::span<const ObjectiveVector> points) {
  auto out = open_output(path);
  write_points(out, points);
  finish(out, path);
}

// ---------------------------------------------------------------------------

void write_metrics_csv(std::ostream& out, std::span<const CsvMetricRow> rows) {
  out << kMetricsCsvVersion << '\n' << kMetricsCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.timestep << ',' << row.algorithm << ',' << row.environment << ',' << row.seed << ','
        << format_real(row.hypervolume) << ',' << format_real(row.sparsity) << ','
        << format_real(row.cardinality) << ',';
    if (row.igd) out << format_real(*row.igd);
    out << '\n';
  }
}

std::vector<CsvMetricRow> read_metrics_csv(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<CsvMetricRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line_no == 1 && line != kMetricsCsvVersion) {
        throw ParseError(src, line_no, "unsupported metrics file version '" + line + "'");
      }
      continue;
    }
    if (!header_seen) {
      if (line != kMetricsCsvHeader) throw ParseError(src, line_no, "unexpected header");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw ParseError(src, line_no, "expected 8 fields");
    CsvMetricRow row;
    try {
      row.timestep = parse_unsigned(f[0], "timestep");
      row.algorithm = f[1];
      row.environment = f[2];
      row.seed = f[3];
      row.hypervolume = parse_real(f[4], "hypervolume");
      row.sparsity = parse_real(f[5], "sparsity");
      row.cardinality = parse_real(f[6], "cardinality");
      if (!f[7].empty()) row.igd = parse_real(f[7], "igd");
    } catch (const ConfigError& e) {
      throw ParseError(src, line_no, e.what());
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(src, 0, "missing header");
  return rows;
}

std::vector<CsvMetricRow> read_metrics_csv_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_metrics_csv(in, path.string());
}

std::vector<CsvMetricRow> seed_rows(const MetricTimeline& metrics, std::uint64_t seed,
                                    const std::string& algorithm, const std::string& environment) {
  std::vector<CsvMetricRow> rows;
  rows.reserve(metrics.size());
  for (const auto& m : metrics) {
    rows.push_back({m.timestep, algorithm, environment, std::to_string(seed), m.hypervolume,
                    m.sparsity, static_cast<double>(m.cardinality), m.igd});
  }
  return rows;
}

std::vector<CsvMetricRow> aggregate_rows(const AggregateTimeline& aggregate,
                                         const std::string& algorithm,
                                         const std::string& environment) {
  std::vector<CsvMetricRow> rows;
  rows.reserve(2 * aggregate.size());
  for (const auto& a : aggregate) {
    std::optional<double> igd_mean, igd_sd;
    if (a.igd) {
      igd_mean = a.igd->mean;
      igd_sd = a.igd->sd;
    }
    rows.push_back({a.timestep, algorithm, environment, "mean", a.hypervolume.mean, a.sparsity.mean,
                    a.cardinality.mean, igd_mean});
    rows.push_back({a.timestep, algorithm, environment, "sd", a.hypervolume.sd, a.sparsity.sd,
                    a.cardinality.sd, igd_sd});
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::filesystem::path results_root() {
  const char* dir = std::getenv("MORL_RESULTS_DIR");
  return (dir && *dir) ? std::filesystem::path(dir) : std::filesystem::current_path();
}

std::filesystem::path run_directory(const std::filesystem::path& root, const std::string& name) {
  return root / "runs" / name;
}

std::string manifest_text(const RunPlan& plan, std::string_view timestamp) {
  Settings manifest = plan.resolved;
  manifest.set("run", "version", std::string(artifact_version()));
  manifest.set("run", "created", std::string(timestamp));
  manifest.set("run", "seed_list", *plan.resolved.get("sweep", "seeds"));
  manifest.set("run", "configurations",
               std::to_string(plan.sweep.algorithm == Algorithm::Pql
                                  ? 1
                                  : (plan.sweep.weights ? plan.sweep.weights->size() : 0)));
  return "# morl run manifest; load with --config to replay\n" + manifest.to_text();
}

void write_run(const std::filesystem::path& dir, const RunPlan& plan, const SweepResult& result,
               std::string_view timestamp) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  for (const auto& seed : result.seeds) {
    const fs::path seed_dir = dir / ("seed_" + std::to_string(seed.seed));
    const fs::path csv = seed_dir / "metrics.csv";
    auto out = open_output(csv);
    write_metrics_csv(out, seed_rows(seed.metrics, seed.seed, plan.algorithm_label,
                                     plan.environment_label));
    finish(out, csv);
    for (const auto& snap : seed.fronts) {
      write_points_file(seed_dir / "fronts" / (std::to_string(snap.timestep) + ".points"),
                        snap.front.points());
    }
  }

  const fs::path aggregate = dir / "aggregate" / "metrics.csv";
  auto out = open_output(aggregate);
  write_metrics_csv(out, aggregate_rows(result.aggregate, plan.algorithm_label,
                                        plan.environment_label));
  finish(out, aggregate);

  RunPlan manifest_plan = plan;
  if (plan.sweep.algorithm == Algorithm::Moq) manifest_plan.sweep.weights = result.weights;
  const fs::path manifest = dir / "manifest.txt";
  auto mout = open_output(manifest);
  mout << manifest_text(manifest_plan, timestamp);
  finish(mout, manifest);
}

// ---------------------------------------------------------------------------

std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& run_dir,
                                                   const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(run_dir)) {
    throw ParseError(run_dir.string(), 0, "not a run directory");
  }
  const auto rows = read_metrics_csv_file(run_dir / "aggregate" / "metrics.csv");

  struct Curve {
    const char* file;
    double CsvMetricRow::*value;
  };
  const Curve curves[] = {{"hypervolume_curve.csv", &CsvMetricRow::hypervolume},
                          {"sparsity_curve.csv", &CsvMetricRow::sparsity},
                          {"cardinality_curve.csv", &CsvMetricRow::cardinality}};

  auto mean_sd = [&](auto&& emit) {
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
      if (rows[i].seed != "mean" || rows[i + 1].seed != "sd" || rows[i].timestep != rows[i + 1].timestep) {
        throw ParseError((run_dir / "aggregate" / "metrics.csv").string(), 0,
                         "expected alternating mean and sd rows");
      }
      emit(rows[i], rows[i + 1]);
    }
  };

  std::vector<fs::path> written;
  fs::create_directories(out_dir);
  for (const auto& curve : curves) {
    const fs::path path = out_dir / curve.file;
    auto out = open_output(path);
    out << "timestep,mean,sd\n";
    mean_sd([&](const CsvMetricRow& mean, const CsvMetricRow& sd) {
      out << mean.timestep << ',' << format_real(mean.*curve.value) << ','
          << format_real(sd.*curve.value) << '\n';
    });
    finish(out, path);
    written.push_back(path);
  }

  const bool has_igd = std::any_of(rows.begin(), rows.end(), [](const CsvMetricRow& r) { return r.igd.has_value(); });
  if (has_igd) {
    const fs::path path = out_dir / "igd_curve.csv";
    auto out = open_output(path);
    out << "timestep,mean,sd\n";
    mean_sd([&](const CsvMetricRow& mean, const CsvMetricRow& sd) {
      if (!mean.igd) return;
      out << mean.timestep << ',' << format_real(*mean.igd) << ',' << format_real(sd.igd.value_or(0.0))
          << '\n';
    });
    finish(out, path);
    written.push_back(path);
  }

  // Final front: union over seeds of each seed's last snapshot.
  std::vector<ObjectiveVector> finals;
  std::vector<fs::path> seed_dirs;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    if (entry.is_directory() && entry.path().filename().string().starts_with("seed_")) {
      seed_dirs.push_back(entry.path());
    }
  }
  std::sort(seed_dirs.begin(), seed_dirs.end());
  for (const auto& seed_dir : seed_dirs) {
    std::optional<std::pair<std::size_t, fs::path>> last;
    const fs::path fronts = seed_dir / "fronts";
    if (!fs::is_directory(fronts)) continue;
    for (const auto& f : fs::directory_iterator(fronts)) {
      if (f.path().extension() != ".points") continue;
      std::size_t t = 0;
      try {
        t = parse_unsigned(f.path().stem().string(), "front timestep");
      } catch (const ConfigError&) {
        continue;
      }
      if (!last || t > last->first) last = {t, f.path()};
    }
    if (last) {
      const PointSet front = read_points_file(last->second);
      finals.insert(finals.end(), front.begin(), front.end());
    }
  }
  const fs::path front_path = out_dir / "front_final.points";
  const ParetoArchive front = finals.empty() ? ParetoArchive() : nondominated_filter(finals);
  write_points_file(front_path, front.points());
  written.push_back(front_path);
  return written;
}

}  // namespace morl
