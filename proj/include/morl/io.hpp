#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "morl/config.hpp"
#include "morl/pareto.hpp"
#include "morl/sweep.hpp"

namespace morl {

/// Malformed input file; `line()` is 1-based (0 when not line-specific).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// ---- point files ----------------------------------------------------------
// One point per line, coordinates separated by whitespace; blank lines and
// lines starting with '#' are ignored.

PointSet read_points(std::istream& in, std::string_view source = "<points>");
PointSet read_points_file(const std::filesystem::path& path);
void write_points(std::ostream& out, std::span<const ObjectiveVector> points);
void write_points_file(const std::filesystem::path& path, std::span<const ObjectiveVector> points);

// ---- metric CSV -----------------------------------------------------------

inline constexpr std::string_view kMetricsCsvVersion = "# morl-metrics v1";
inline constexpr std::string_view kMetricsCsvHeader =
    "timestep,algorithm,environment,seed,hypervolume,sparsity,cardinality,igd";

struct CsvMetricRow {
  std::size_t timestep = 0;
  std::string algorithm;
  std::string environment;
  std::string seed;  // a seed number, or "mean" / "sd" in aggregates
  double hypervolume = 0.0;
  double sparsity = 0.0;
  double cardinality = 0.0;
  std::optional<double> igd;
};

void write_metrics_csv(std::ostream& out, std::span<const CsvMetricRow> rows);
std::vector<CsvMetricRow> read_metrics_csv(std::istream& in, std::string_view source = "<csv>");
std::vector<CsvMetricRow> read_metrics_csv_file(const std::filesystem::path& path);

std::vector<CsvMetricRow> seed_rows(const MetricTimeline& metrics, std::uint64_t seed,
                                    const std::string& algorithm, const std::string& environment);
/// Two rows per timestep: the mean, then the standard deviation.
std::vector<CsvMetricRow> aggregate_rows(const AggregateTimeline& aggregate,
                                         const std::string& algorithm,
                                         const std::string& environment);

// ---- run directories ------------------------------------------------------

/// `$MORL_RESULTS_DIR` when set and non-empty, else the working directory.
std::filesystem::path results_root();

/// `<root>/runs/<name>`.
std::filesystem::path run_directory(const std::filesystem::path& root, const std::string& name);

/// Manifest text: the resolved settings plus a `[run]` section with the
/// artifact version, creation time and seed list. Loading it back as a
/// config file reproduces the run.
std::string manifest_text(const RunPlan& plan, std::string_view timestamp);

/// Writes `seed_<k>/metrics.csv`, `seed_<k>/fronts/<t>.points`,
/// `aggregate/metrics.csv` and `manifest.txt` under `dir`.
void write_run(const std::filesystem::path& dir, const RunPlan& plan, const SweepResult& result,
               std::string_view timestamp);

/// Plot-ready curves from a run directory's aggregate CSV (timestep, mean,
/// sd), and the non-dominated union of every seed's final front.
/// Returns the written files.
std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& run_dir,
                                                   const std::filesystem::path& out_dir);

std::string_view artifact_version();

}  // namespace morl
