#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "morl/pareto.hpp"

namespace morl {

// Action ids shared by both gridworlds.
inline constexpr std::size_t kUp = 0;
inline constexpr std::size_t kDown = 1;
inline constexpr std::size_t kLeft = 2;
inline constexpr std::size_t kRight = 3;
inline constexpr std::size_t kGridActions = 4;

inline constexpr std::size_t kDefaultMaxEpisodeSteps = 1000;

struct EnvSpec {
  std::string name;
  std::size_t num_objectives = 0;
  std::size_t action_count = kGridActions;
  std::size_t state_count = 0;
  std::size_t max_episode_steps = kDefaultMaxEpisodeSteps;
};

struct StepOutcome {
  std::size_t next_state = 0;
  ObjectiveVector reward;
  bool terminated = false;
  bool truncated = false;
};

// One deterministic transition of the underlying MOMDP, without the episode
// step limit.
struct Transition {
  std::size_t next_state = 0;
  ObjectiveVector reward;
  bool terminal = false;
};

/// Episodic, deterministic, discrete MOMDP. Subclasses supply the model;
/// this class owns the episode state and the truncation counter.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual std::size_t start_state() const = 0;
  virtual Transition transition(std::size_t state, std::size_t action) const = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;

  std::size_t reset();
  StepOutcome step(std::size_t action);

  std::size_t state() const { return state_; }
  std::size_t elapsed_steps() const { return steps_; }

 private:
  std::size_t state_ = 0;
  std::size_t steps_ = 0;
  bool needs_reset_ = true;
};

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Parsed map file: a `rows cols` header, one line per grid row, and an
/// optional `[legend]` section of `symbol = value` lines. Lines starting
/// with `#` before the header or inside the legend are comments.
struct GridMap {
  int rows = 0;
  int cols = 0;
  std::vector<std::string> grid;
  std::map<char, double> legend;

  char at(Cell c) const { return grid[c.row][c.col]; }
};

GridMap parse_grid_map(std::string_view text);
GridMap load_grid_map(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Deep Sea Treasure

struct Treasure {
  Cell cell;
  double value = 0.0;
};

struct DstMap {
  int rows = 0;
  int cols = 0;
  std::vector<bool> seabed;  // row-major
  std::vector<Treasure> treasures;
  Cell start;

  bool blocked(Cell c) const;
  std::optional<double> treasure_at(Cell c) const;

  /// Treasures are legend symbols; `#` is seabed, `S` the start.
  static DstMap from_grid(const GridMap& grid);
  /// The bundled ten-treasure concave map.
  static DstMap concave();
};

/// Minimal number of steps from the start to each treasure, in the order of
/// `map.treasures`; nullopt for unreachable treasures.
std::vector<std::optional<std::size_t>> dst_treasure_distances(const DstMap& map);

class DeepSeaTreasure final : public Environment {
 public:
  explicit DeepSeaTreasure(DstMap map = DstMap::concave(),
                           std::size_t max_episode_steps = kDefaultMaxEpisodeSteps);

  const EnvSpec& spec() const override { return spec_; }
  std::size_t start_state() const override { return state_of(map_.start); }
  Transition transition(std::size_t state, std::size_t action) const override;
  std::unique_ptr<Environment> clone() const override {
    return std::make_unique<DeepSeaTreasure>(*this);
  }

  const DstMap& map() const { return map_; }
  std::size_t state_of(Cell c) const { return static_cast<std::size_t>(c.row * map_.cols + c.col); }
  Cell cell_of(std::size_t state) const;

 private:
  DstMap map_;
  EnvSpec spec_;
};

/// Discounted return of the shortest path to every treasure,
/// (v * gamma^(t-1), -sum_{k<t} gamma^k), one point per treasure.
///
/// The set is deliberately not dominance-filtered: it is the reference set
/// the DST indicators are reported against. At gamma = 0.9 the concave map's
/// treasure-24 point (6.78, -7.46) is dominated by treasure 16's, so the
/// non-dominated part has 9 of the 10 points.
PointSet dst_true_front(const DstMap& map, double gamma);

// ---------------------------------------------------------------------------
// Four-Room

struct Item {
  Cell cell;
  std::size_t shape = 0;
};

struct FourRoomMap {
  int rows = 0;
  int cols = 0;
  std::vector<bool> walls;  // row-major
  std::vector<Item> items;
  std::size_t shape_count = 3;
  Cell start;
  Cell goal;

  bool blocked(Cell c) const;

  /// Items are legend symbols whose value is the shape index; `#` is wall,
  /// `S` the start and `G` the goal.
  static FourRoomMap from_grid(const GridMap& grid);
  /// The bundled 13x13 layout with three items of each of three shapes.
  static FourRoomMap standard();
};

class FourRoom final : public Environment {
 public:
  explicit FourRoom(FourRoomMap map = FourRoomMap::standard(),
                    std::size_t max_episode_steps = kDefaultMaxEpisodeSteps);

  const EnvSpec& spec() const override { return spec_; }
  std::size_t start_state() const override { return encode(map_.start, 0); }
  Transition transition(std::size_t state, std::size_t action) const override;
  std::unique_ptr<Environment> clone() const override { return std::make_unique<FourRoom>(*this); }

  const FourRoomMap& map() const { return map_; }

  /// State id = cell index * 2^items + collected-items mask.
  std::size_t encode(Cell c, std::uint32_t collected) const;
  std::pair<Cell, std::uint32_t> decode(std::size_t state) const;

 private:
  FourRoomMap map_;
  EnvSpec spec_;
  std::vector<int> item_index_;  // per cell, -1 when empty
};

// ---------------------------------------------------------------------------
// Registry

enum class EnvId { DstConcave, FourRoom };

EnvId parse_env_id(std::string_view token);
std::string to_string(EnvId id);

struct EnvConfig {
  EnvId id = EnvId::DstConcave;
  std::optional<std::filesystem::path> map_path;
  std::size_t max_episode_steps = kDefaultMaxEpisodeSteps;
};

std::unique_ptr<Environment> make_environment(const EnvConfig& config);

/// Hypervolume reference point used for reporting: (0, -50) for DST and
/// (-1, -1, -1) for Four-Room.
ObjectiveVector default_reference_point(EnvId id);

/// The reference set when it is known (DST only).
std::optional<PointSet> known_true_front(const EnvConfig& config, double gamma);

/// Text of the bundled map files.
std::string_view bundled_map_text(EnvId id);

}  // namespace morl
