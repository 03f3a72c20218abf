#include "morl/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "morl/environment.hpp"
#include "morl/error.hpp"
#include "morl/io.hpp"

namespace morl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"env", {"name", "map", "max_episode_steps"}},
      {"agent",
       {"algo", "scalariser", "weights", "alpha", "gamma", "tau", "steps", "eps_initial",
        "eps_final", "eps_decay", "set_eval", "ref_point", "state_cap"}},
      {"sweep",
       {"name", "seeds", "workers", "archive", "weight_step", "grid_size", "eval_interval", "ref",
        "truth"}},
      {"run", {}},
  };
  return keys;
}

[[noreturn]] void config_error(const std::string& message) { throw ConfigError(message); }

}  // namespace

// ---------------------------------------------------------------------------

Settings Settings::parse(std::string_view text, std::string_view source) {
  Settings out;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto fail = [&](const std::string& message) {
    config_error(std::string(source) + ":" + std::to_string(line_no) + ": " + message);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(section)) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    if (section.empty()) fail("setting outside of a section");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail("empty key");
    if (section != "run" && !known_keys().at(section).contains(key)) {
      fail("unknown setting '" + key + "' in [" + section + "]");
    }
    out.set(section, key, std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

Settings Settings::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

void Settings::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = std::move(value);
}

std::optional<std::string> Settings::get(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

bool Settings::has(const std::string& section, const std::string& key) const {
  return get(section, key).has_value();
}

void Settings::merge(const Settings& overrides) {
  for (const auto& [section, entries] : overrides.sections_) {
    for (const auto& [key, value] : entries) set(section, key, value);
  }
}

std::string Settings::to_text() const {
  std::string out;
  for (const char* section : {"env", "agent", "sweep", "run"}) {
    const auto s = sections_.find(section);
    if (s == sections_.end() || s->second.empty()) continue;
    if (!out.empty()) out += '\n';
    out += '[';
    out += section;
    out += "]\n";
    for (const auto& [key, value] : s->second) out += key + " = " + value + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

double parse_real(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    config_error("invalid number '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    config_error("invalid non-negative integer '" + std::string(text) + "' for " +
                 std::string(what));
  }
  return value;
}

bool parse_bool(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  config_error("invalid boolean '" + std::string(text) + "' for " + std::string(what));
}

std::vector<double> parse_real_list(std::string_view text, std::string_view what) {
  std::string normalised(text);
  std::replace(normalised.begin(), normalised.end(), ',', ' ');
  std::istringstream in(normalised);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_real(token, what));
  if (out.empty()) config_error("empty list for " + std::string(what));
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  text = trim(text);
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto first = parse_unsigned(text.substr(0, dots), "seeds");
    const auto last = parse_unsigned(text.substr(dots + 2), "seeds");
    if (last < first) config_error("empty seed range '" + std::string(text) + "'");
    if (last - first >= 100'000) config_error("seed range too large");
    std::vector<std::uint64_t> out;
    for (auto s = first; s <= last; ++s) out.push_back(s);
    return out;
  }
  std::string normalised(text);
  std::replace(normalised.begin(), normalised.end(), ',', ' ');
  std::istringstream in(normalised);
  std::vector<std::uint64_t> out;
  std::string token;
  while (in >> token) out.push_back(parse_unsigned(token, "seeds"));
  if (out.empty()) config_error("no seeds given");
  return out;
}

std::string format_real(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

// ---------------------------------------------------------------------------

namespace {

std::string join_reals(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

std::string seeds_text(std::span<const std::uint64_t> seeds) {
  const bool contiguous = seeds.size() > 1 && std::adjacent_find(seeds.begin(), seeds.end(), [](auto a, auto b) {
                                                return b != a + 1;
                                              }) == seeds.end();
  if (contiguous) return std::to_string(seeds.front()) + ".." + std::to_string(seeds.back());
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(seeds[i]);
  }
  return out;
}

// Reads settings while recording the value actually used for each key.
class Resolver {
 public:
  explicit Resolver(const Settings& user) : user_(user) {}

  std::string text(const char* section, const char* key, const std::string& fallback) {
    return record(section, key, user_.get(section, key).value_or(fallback));
  }
  double real(const char* section, const char* key, double fallback) {
    const auto v = user_.get(section, key);
    const double value = v ? parse_real(*v, name(section, key)) : fallback;
    record(section, key, format_real(value));
    return value;
  }
  std::uint64_t count(const char* section, const char* key, std::uint64_t fallback) {
    const auto v = user_.get(section, key);
    const auto value = v ? parse_unsigned(*v, name(section, key)) : fallback;
    record(section, key, std::to_string(value));
    return value;
  }
  bool flag(const char* section, const char* key, bool fallback) {
    const auto v = user_.get(section, key);
    const bool value = v ? parse_bool(*v, name(section, key)) : fallback;
    record(section, key, value ? "true" : "false");
    return value;
  }
  std::vector<double> reals(const char* section, const char* key, const std::vector<double>& fallback) {
    const auto v = user_.get(section, key);
    auto value = v ? parse_real_list(*v, name(section, key)) : fallback;
    record(section, key, join_reals(value));
    return value;
  }
  std::optional<std::string> optional(const char* section, const char* key) {
    auto v = user_.get(section, key);
    if (v) record(section, key, *v);
    return v;
  }

  Settings& resolved() { return resolved_; }

 private:
  static std::string name(const char* section, const char* key) {
    return std::string(section) + "." + key;
  }
  std::string record(const char* section, const char* key, std::string value) {
    resolved_.set(section, key, value);
    return value;
  }

  const Settings& user_;
  Settings resolved_;
};

template <typename F>
auto contract(F&& f) {
  try {
    return f();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

RunPlan resolve_run(const Settings& user, RunKind kind) {
  Resolver r(user);
  RunPlan plan;
  SweepConfig& sweep = plan.sweep;

  const auto env_name = user.get("env", "name");
  if (!env_name) config_error("missing required setting env.name (--env)");
  sweep.env.id = contract([&] { return parse_env_id(*env_name); });
  plan.environment_label = to_string(sweep.env.id);
  r.text("env", "name", plan.environment_label);
  if (const auto map = r.optional("env", "map")) sweep.env.map_path = *map;
  sweep.env.max_episode_steps = r.count("env", "max_episode_steps", kDefaultMaxEpisodeSteps);
  if (sweep.env.max_episode_steps == 0) config_error("env.max_episode_steps must be positive");

  std::unique_ptr<Environment> env;
  try {
    env = make_environment(sweep.env);
  } catch (const std::exception& e) {
    config_error(std::string("cannot build environment: ") + e.what());
  }
  const std::size_t m = env->spec().num_objectives;
  const bool four_room = sweep.env.id == EnvId::FourRoom;
  const ObjectiveVector env_ref = default_reference_point(sweep.env.id);

  sweep.algorithm = contract([&] { return parse_algorithm(r.text("agent", "algo", "moq")); });
  const double gamma = r.real("agent", "gamma", four_room ? 0.99 : 0.9);
  const auto steps = r.count("agent", "steps", four_room ? 800'000 : 400'000);
  EpsilonSchedule eps;
  eps.initial = r.real("agent", "eps_initial", eps.initial);
  eps.final_value = r.real("agent", "eps_final", eps.final_value);
  eps.decay_fraction = r.real("agent", "eps_decay", eps.decay_fraction);

  if (sweep.algorithm == Algorithm::Moq) {
    MoqConfig& moq = sweep.moq;
    moq.gamma = gamma;
    moq.total_timesteps = steps;
    moq.epsilon = eps;
    moq.scalariser = contract([&] { return parse_scalariser(r.text("agent", "scalariser", "linear")); });
    moq.alpha = r.real("agent", "alpha", 0.1);
    moq.tau = r.real("agent", "tau", four_room ? 6.0 : 4.0);
    plan.algorithm_label = "moq-" + to_string(moq.scalariser);
    if (kind == RunKind::Train) {
      const auto w = r.reals("agent", "weights", std::vector<double>(m, 1.0 / static_cast<double>(m)));
      sweep.weights = std::vector<WeightVector>{contract([&] { return WeightVector(w); })};
      moq.weights = sweep.weights->front();
    }
  } else {
    PqlConfig& pql = sweep.pql;
    pql.gamma = gamma;
    pql.total_timesteps = steps;
    pql.epsilon = eps;
    pql.set_eval.mode = contract([&] { return parse_set_eval(r.text("agent", "set_eval", "hypervolume")); });
    if (pql.set_eval.mode == SetEvalMode::Hypervolume) {
      pql.set_eval.ref = r.reals("agent", "ref_point", env_ref);
    }
    pql.state_cap = r.count("agent", "state_cap", kDefaultStateCap);
    plan.algorithm_label = "pql";
  }

  if (kind == RunKind::Sweep && sweep.algorithm == Algorithm::Moq) {
    sweep.weight_step = r.real("sweep", "weight_step", 0.1);
    if (const auto g = r.optional("sweep", "grid_size")) {
      sweep.grid_size = parse_unsigned(*g, "sweep.grid_size");
      if (*sweep.grid_size == 0) config_error("sweep.grid_size must be positive");
    }
  }
  sweep.seeds = parse_seed_list(r.text("sweep", "seeds", "42"));
  r.resolved().set("sweep", "seeds", seeds_text(sweep.seeds));
  sweep.workers = r.count("sweep", "workers", 1);
  sweep.cumulative_archive = r.flag("sweep", "archive", false);
  sweep.eval_interval = r.count("sweep", "eval_interval", 1000);
  sweep.ref = r.reals("sweep", "ref", env_ref);

  const std::string truth = r.text("sweep", "truth", "auto");
  if (truth == "auto") {
    sweep.truth = known_true_front(sweep.env, gamma);
  } else if (truth != "none") {
    try {
      sweep.truth = read_points_file(truth);
    } catch (const std::exception& e) {
      config_error(std::string("cannot read sweep.truth: ") + e.what());
    }
  }

  sweep.name = r.text("sweep", "name", plan.algorithm_label + "-" + plan.environment_label);
  if (sweep.name.empty() || sweep.name.find_first_of("/\\") != std::string::npos ||
      sweep.name == "." || sweep.name == "..") {
    config_error("invalid run name '" + sweep.name + "'");
  }

  contract([&] {
    validate_sweep(sweep);
    return 0;
  });
  plan.resolved = std::move(r.resolved());
  return plan;
}

}  // namespace morl
