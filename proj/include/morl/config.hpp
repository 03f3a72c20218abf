#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "morl/pareto.hpp"
#include "morl/sweep.hpp"

namespace morl {

/// A malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sectioned `key = value` settings. Sections are `env`, `agent`, `sweep`
/// and `run` (informational, ignored when resolving).
class Settings {
 public:
  /// Parses config-file text; `#` starts a comment line.
  static Settings parse(std::string_view text, std::string_view source = "<config>");
  static Settings load(const std::filesystem::path& path);

  void set(const std::string& section, const std::string& key, std::string value);
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  bool has(const std::string& section, const std::string& key) const;

  /// Copies every entry of `overrides` over this one.
  void merge(const Settings& overrides);

  /// Config-file text in canonical order; `parse(to_text())` gives an equal
  /// object.
  std::string to_text() const;

  friend bool operator==(const Settings&, const Settings&) = default;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Value parsers used for settings and command-line flags. All throw
// ConfigError naming `what` on malformed input.
double parse_real(std::string_view text, std::string_view what);
std::uint64_t parse_unsigned(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);
/// Comma- or whitespace-separated reals.
std::vector<double> parse_real_list(std::string_view text, std::string_view what);
/// "42..51" (inclusive), "42,43,47", or a single seed.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

enum class RunKind { Train, Sweep };

/// A fully resolved run: every setting filled in (defaults depend on the
/// environment), plus the sweep it describes.
struct RunPlan {
  Settings resolved;
  SweepConfig sweep;
  std::string algorithm_label;    // "moq-linear", "moq-chebyshev" or "pql"
  std::string environment_label;  // "dst-concave" or "four-room"
};

/// Fills defaults, validates every key, and builds the sweep. A train run is
/// a sweep over the single weight vector `agent.weights`. Throws ConfigError.
RunPlan resolve_run(const Settings& user, RunKind kind);

}  // namespace morl
