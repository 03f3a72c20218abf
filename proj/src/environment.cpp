#include "morl/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "morl/error.hpp"

namespace morl {

namespace {

constexpr int kRowDelta[kGridActions] = {-1, 1, 0, 0};
constexpr int kColDelta[kGridActions] = {0, 0, -1, 1};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

void map_error(std::size_t line, const std::string& what) {
  throw ContractViolation("map line " + std::to_string(line) + ": " + what);
}

bool in_bounds(Cell c, int rows, int cols) {
  return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols;
}

Cell find_unique(const GridMap& grid, char symbol, const char* what) {
  std::optional<Cell> found;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (grid.grid[r][c] != symbol) continue;
      if (found) throw ContractViolation(std::string("map has more than one ") + what);
      found = Cell{r, c};
    }
  }
  if (!found) throw ContractViolation(std::string("map has no ") + what);
  return *found;
}

Cell move(Cell from, std::size_t action) {
  return {from.row + kRowDelta[action], from.col + kColDelta[action]};
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t Environment::reset() {
  state_ = start_state();
  steps_ = 0;
  needs_reset_ = false;
  return state_;
}

StepOutcome Environment::step(std::size_t action) {
  require(!needs_reset_, "step called on a finished episode; call reset first");
  require(action < spec().action_count, "invalid action id");
  Transition t = transition(state_, action);
  ++steps_;
  StepOutcome out;
  out.next_state = t.next_state;
  out.reward = std::move(t.reward);
  out.terminated = t.terminal;
  out.truncated = !t.terminal && steps_ >= spec().max_episode_steps;
  state_ = out.next_state;
  needs_reset_ = out.terminated || out.truncated;
  return out;
}

// ---------------------------------------------------------------------------

GridMap parse_grid_map(std::string_view text) {
  GridMap map;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  bool in_legend = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (in_legend) {
      if (line.empty() || line.front() == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string_view::npos) map_error(line_no, "legend entry must be 'symbol = value'");
      auto key = trim(line.substr(0, eq));
      auto value = trim(line.substr(eq + 1));
      if (key.size() != 1) map_error(line_no, "legend symbol must be a single character");
      try {
        std::size_t used = 0;
        double v = std::stod(std::string(value), &used);
        if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument("value");
        map.legend[key.front()] = v;
      } catch (const std::exception&) {
        map_error(line_no, "legend value is not a number");
      }
      continue;
    }
    if (!have_header) {
      if (line.empty() || line.front() == '#') continue;
      std::istringstream header{std::string(line)};
      if (!(header >> map.rows >> map.cols) || map.rows <= 0 || map.cols <= 0) {
        map_error(line_no, "expected header 'rows cols'");
      }
      std::string extra;
      if (header >> extra) map_error(line_no, "unexpected text after header");
      have_header = true;
      continue;
    }
    if (line == "[legend]") {
      in_legend = true;
      continue;
    }
    if (static_cast<int>(map.grid.size()) >= map.rows) {
      if (line.empty()) continue;
      map_error(line_no, "more grid rows than the header declares");
    }
    if (static_cast<int>(line.size()) != map.cols) {
      map_error(line_no, "grid row has " + std::to_string(line.size()) + " cells, expected " +
                             std::to_string(map.cols));
    }
    map.grid.emplace_back(line);
  }

  if (!have_header) throw ContractViolation("map is missing its 'rows cols' header");
  if (static_cast<int>(map.grid.size()) != map.rows) {
    throw ContractViolation("map declares " + std::to_string(map.rows) + " rows but has " +
                            std::to_string(map.grid.size()));
  }
  for (const auto& row : map.grid) {
    for (char ch : row) {
      if (ch == '.' || ch == '#' || ch == 'S' || ch == 'G') continue;
      if (!map.legend.contains(ch)) {
        throw ContractViolation(std::string("map symbol '") + ch + "' is not in the legend");
      }
    }
  }
  return map;
}

GridMap load_grid_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open map file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_grid_map(text.str());
}

// ---------------------------------------------------------------------------
// Deep Sea Treasure

bool DstMap::blocked(Cell c) const {
  return !in_bounds(c, rows, cols) || seabed[c.row * cols + c.col];
}

std::optional<double> DstMap::treasure_at(Cell c) const {
  for (const auto& t : treasures) {
    if (t.cell == c) return t.value;
  }
  return std::nullopt;
}

DstMap DstMap::from_grid(const GridMap& grid) {
  DstMap map;
  map.rows = grid.rows;
  map.cols = grid.cols;
  map.seabed.assign(static_cast<std::size_t>(grid.rows * grid.cols), false);
  map.start = find_unique(grid, 'S', "start cell 'S'");
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const char ch = grid.grid[r][c];
      if (ch == '#') map.seabed[r * grid.cols + c] = true;
      if (ch == 'G') throw ContractViolation("a treasure map has no goal cell");
      if (auto it = grid.legend.find(ch); it != grid.legend.end()) {
        map.treasures.push_back({{r, c}, it->second});
      }
    }
  }
  require(!map.treasures.empty(), "treasure map has no treasures");

  // Farther treasures must be worth more.
  auto dist = dst_treasure_distances(map);
  for (std::size_t i = 0; i < map.treasures.size(); ++i) {
    for (std::size_t j = 0; j < map.treasures.size(); ++j) {
      if (dist[i] && dist[j] && *dist[i] < *dist[j] &&
          map.treasures[i].value >= map.treasures[j].value) {
        throw ContractViolation("treasure values must increase with distance from the start");
      }
    }
  }
  return map;
}

DstMap DstMap::concave() {
  static const DstMap map = from_grid(parse_grid_map(bundled_map_text(EnvId::DstConcave)));
  return map;
}

std::vector<std::optional<std::size_t>> dst_treasure_distances(const DstMap& map) {
  std::vector<std::size_t> dist(map.seabed.size(), SIZE_MAX);
  std::queue<Cell> frontier;
  dist[map.start.row * map.cols + map.start.col] = 0;
  frontier.push(map.start);
  while (!frontier.empty()) {
    Cell here = frontier.front();
    frontier.pop();
    // Treasures end the episode, so paths never pass through them.
    if (map.treasure_at(here)) continue;
    const std::size_t d = dist[here.row * map.cols + here.col];
    for (std::size_t a = 0; a < kGridActions; ++a) {
      Cell next = move(here, a);
      if (map.blocked(next)) continue;
      auto& slot = dist[next.row * map.cols + next.col];
      if (slot != SIZE_MAX) continue;
      slot = d + 1;
      frontier.push(next);
    }
  }

  std::vector<std::optional<std::size_t>> out;
  for (const auto& t : map.treasures) {
    const std::size_t d = dist[t.cell.row * map.cols + t.cell.col];
    out.push_back(d == SIZE_MAX ? std::nullopt : std::optional<std::size_t>(d));
  }
  return out;
}

DeepSeaTreasure::DeepSeaTreasure(DstMap map, std::size_t max_episode_steps)
    : map_(std::move(map)) {
  require(max_episode_steps > 0, "max_episode_steps must be positive");
  spec_.name = "dst-concave";
  spec_.num_objectives = 2;
  spec_.action_count = kGridActions;
  spec_.state_count = static_cast<std::size_t>(map_.rows * map_.cols);
  spec_.max_episode_steps = max_episode_steps;
}

Cell DeepSeaTreasure::cell_of(std::size_t state) const {
  require(state < spec_.state_count, "state id out of range");
  return {static_cast<int>(state) / map_.cols, static_cast<int>(state) % map_.cols};
}

Transition DeepSeaTreasure::transition(std::size_t state, std::size_t action) const {
  require(action < kGridActions, "invalid action id");
  const Cell here = cell_of(state);
  Cell next = move(here, action);
  if (map_.blocked(next)) next = here;

  Transition t;
  t.next_state = state_of(next);
  t.reward = {0.0, -1.0};
  if (auto value = map_.treasure_at(next)) {
    t.reward[0] = *value;
    t.terminal = true;
  }
  return t;
}

PointSet dst_true_front(const DstMap& map, double gamma) {
  require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  const auto dist = dst_treasure_distances(map);
  std::vector<ObjectiveVector> points;
  for (std::size_t i = 0; i < map.treasures.size(); ++i) {
    require(dist[i].has_value(), "a treasure is unreachable from the start cell");
    const std::size_t steps = *dist[i];
    require(steps >= 1, "a treasure may not sit on the start cell");
    double discount = 1.0;
    double penalty = 0.0;
    for (std::size_t k = 0; k + 1 < steps; ++k) {
      penalty -= discount;
      discount *= gamma;
    }
    penalty -= discount;  // the final, treasure-collecting step
    points.push_back({map.treasures[i].value * discount, penalty});
  }
  return make_point_set(std::move(points));
}

// ---------------------------------------------------------------------------
// Four-Room

bool FourRoomMap::blocked(Cell c) const {
  return !in_bounds(c, rows, cols) || walls[c.row * cols + c.col];
}

FourRoomMap FourRoomMap::from_grid(const GridMap& grid) {
  FourRoomMap map;
  map.rows = grid.rows;
  map.cols = grid.cols;
  map.walls.assign(static_cast<std::size_t>(grid.rows * grid.cols), false);
  map.start = find_unique(grid, 'S', "start cell 'S'");
  map.goal = find_unique(grid, 'G', "goal cell 'G'");

  std::size_t max_shape = 0;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const char ch = grid.grid[r][c];
      if (ch == '#') map.walls[r * grid.cols + c] = true;
      if (auto it = grid.legend.find(ch); it != grid.legend.end()) {
        const double v = it->second;
        if (v < 0 || v != std::floor(v)) {
          throw ContractViolation(std::string("item '") + ch + "' needs a non-negative shape index");
        }
        map.items.push_back({{r, c}, static_cast<std::size_t>(v)});
        max_shape = std::max(max_shape, static_cast<std::size_t>(v));
      }
    }
  }
  require(!map.items.empty(), "four-room map has no items");
  require(map.items.size() <= 20, "four-room map supports at most 20 items");
  require(max_shape < 3, "four-room items must use shape indices 0, 1 or 2");
  map.shape_count = 3;
  return map;
}

FourRoomMap FourRoomMap::standard() {
  static const FourRoomMap map = from_grid(parse_grid_map(bundled_map_text(EnvId::FourRoom)));
  return map;
}

FourRoom::FourRoom(FourRoomMap map, std::size_t max_episode_steps) : map_(std::move(map)) {
  require(max_episode_steps > 0, "max_episode_steps must be positive");
  const auto cells = static_cast<std::size_t>(map_.rows * map_.cols);
  spec_.name = "four-room";
  spec_.num_objectives = map_.shape_count;
  spec_.action_count = kGridActions;
  spec_.state_count = cells << map_.items.size();
  spec_.max_episode_steps = max_episode_steps;

  item_index_.assign(cells, -1);
  for (std::size_t i = 0; i < map_.items.size(); ++i) {
    const Cell c = map_.items[i].cell;
    item_index_[c.row * map_.cols + c.col] = static_cast<int>(i);
  }
}

std::size_t FourRoom::encode(Cell c, std::uint32_t collected) const {
  require(in_bounds(c, map_.rows, map_.cols), "cell out of bounds");
  require(collected < (1u << map_.items.size()), "collected mask out of range");
  const auto cell = static_cast<std::size_t>(c.row * map_.cols + c.col);
  return (cell << map_.items.size()) | collected;
}

std::pair<Cell, std::uint32_t> FourRoom::decode(std::size_t state) const {
  require(state < spec_.state_count, "state id out of range");
  const std::size_t bits = map_.items.size();
  const auto cell = static_cast<int>(state >> bits);
  const auto mask = static_cast<std::uint32_t>(state & ((std::size_t{1} << bits) - 1));
  return {Cell{cell / map_.cols, cell % map_.cols}, mask};
}

Transition FourRoom::transition(std::size_t state, std::size_t action) const {
  require(action < kGridActions, "invalid action id");
  auto [here, collected] = decode(state);
  Cell next = move(here, action);
  if (map_.blocked(next)) next = here;

  Transition t;
  t.reward.assign(map_.shape_count, 0.0);
  const int item = item_index_[next.row * map_.cols + next.col];
  if (item >= 0 && !(collected & (1u << item))) {
    collected |= 1u << item;
    t.reward[map_.items[item].shape] = 1.0;
  }
  t.terminal = next == map_.goal;
  t.next_state = encode(next, collected);
  return t;
}

// ---------------------------------------------------------------------------
// Registry

EnvId parse_env_id(std::string_view token) {
  if (token == "dst-concave" || token == "dst") return EnvId::DstConcave;
  if (token == "four-room" || token == "fourroom") return EnvId::FourRoom;
  throw ContractViolation("unknown environment '" + std::string(token) +
                          "' (expected dst-concave or four-room)");
}

std::string to_string(EnvId id) { return id == EnvId::DstConcave ? "dst-concave" : "four-room"; }

std::unique_ptr<Environment> make_environment(const EnvConfig& config) {
  switch (config.id) {
    case EnvId::DstConcave: {
      DstMap map = config.map_path ? DstMap::from_grid(load_grid_map(*config.map_path))
                                   : DstMap::concave();
      return std::make_unique<DeepSeaTreasure>(std::move(map), config.max_episode_steps);
    }
    case EnvId::FourRoom: {
      FourRoomMap map = config.map_path ? FourRoomMap::from_grid(load_grid_map(*config.map_path))
                                        : FourRoomMap::standard();
      return std::make_unique<FourRoom>(std::move(map), config.max_episode_steps);
    }
  }
  throw ContractViolation("unknown environment");
}

ObjectiveVector default_reference_point(EnvId id) {
  return id == EnvId::DstConcave ? ObjectiveVector{0.0, -50.0} : ObjectiveVector{-1.0, -1.0, -1.0};
}

std::optional<PointSet> known_true_front(const EnvConfig& config, double gamma) {
  if (config.id != EnvId::DstConcave) return std::nullopt;
  DstMap map = config.map_path ? DstMap::from_grid(load_grid_map(*config.map_path))
                               : DstMap::concave();
  return dst_true_front(map, gamma);
}

}  // namespace morl
