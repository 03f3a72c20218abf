#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace morl {

// A point in objective space. All objectives are maximised.
using ObjectiveVector = std::vector<double>;

// Sorted, duplicate-free collection of points that may include dominated
// ones (e.g. a reference set listing every treasure's optimal return).
using PointSet = std::vector<ObjectiveVector>;

PointSet make_point_set(std::vector<ObjectiveVector> points);

/// True iff `a` is at least as good as `b` everywhere and strictly better
/// somewhere. Throws ContractViolation on a dimension mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

/// A set of mutually non-dominated points of a fixed dimension.
///
/// Points are kept in lexicographic order so that two archives holding the
/// same set compare equal and iterate identically. Exact duplicates are
/// stored once.
class ParetoArchive {
 public:
  ParetoArchive() = default;
  explicit ParetoArchive(std::size_t dimension) : dimension_(dimension) {}

  /// Inserts `p` unless an archived point dominates or equals it. Points
  /// dominated by `p` are evicted. Returns whether `p` was added.
  bool insert(const ObjectiveVector& p);

  bool contains(std::span<const double> p) const;

  const std::vector<ObjectiveVector>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  // 0 until the first point is inserted, unless given at construction.
  std::size_t dimension() const { return dimension_; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  friend bool operator==(const ParetoArchive& a, const ParetoArchive& b) {
    return a.points_ == b.points_;
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<ObjectiveVector> points_;
};

/// Non-dominated, deduplicated subset of `points`, independent of input order.
ParetoArchive nondominated_filter(std::span<const ObjectiveVector> points);

/// Exact hypervolume of the region dominated by `front` and bounded below by
/// `ref`. Coordinates below the reference are clipped to it, so such points
/// contribute nothing along that axis. Supports 1 to 3 objectives.
double hypervolume(const ParetoArchive& front, std::span<const double> ref);
double hypervolume(std::span<const ObjectiveVector> points, std::span<const double> ref);

/// Mean squared gap between neighbouring values, per objective, summed over
/// objectives: (1 / (n - 1)) * sum_j sum_i (s_j[i] - s_j[i + 1])^2 where s_j
/// is objective j sorted. Fronts with fewer than two points have sparsity 0.
double sparsity(std::span<const ObjectiveVector> points);
double sparsity(const ParetoArchive& front);

// Number of distinct points.
std::size_t cardinality(std::span<const ObjectiveVector> points);
std::size_t cardinality(const ParetoArchive& front);

/// Inverted generational distance: mean over `truth` of the Euclidean
/// distance to the nearest point of `approx`. Empty `approx` gives nullopt.
std::optional<double> igd(std::span<const ObjectiveVector> approx,
                          std::span<const ObjectiveVector> truth);
std::optional<double> igd(const ParetoArchive& approx, std::span<const ObjectiveVector> truth);

}  // namespace morl
