#include "morl/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "morl/error.hpp"

namespace morl {

namespace {

void check_finite(std::span<const double> p) {
  for (double v : p) require(std::isfinite(v), "objective values must be finite");
}

// Area of the union of boxes [ref, p] in the plane; `pts` must be sorted by
// the first coordinate in descending order.
double sweep_2d(std::span<const ObjectiveVector> pts, double ref_y, double ref_x) {
  double area = 0.0;
  double covered_y = ref_y;
  for (const auto& p : pts) {
    if (p[1] > covered_y) {
      area += (p[0] - ref_x) * (p[1] - covered_y);
      covered_y = p[1];
    }
  }
  return area;
}

std::vector<ObjectiveVector> clipped(std::span<const ObjectiveVector> points,
                                     std::span<const double> ref) {
  std::vector<ObjectiveVector> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    require(p.size() == ref.size(), "hypervolume: reference point dimension mismatch");
    ObjectiveVector q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = std::max(p[i], ref[i]);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ContractViolation("dominates: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
  }
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly_better = true;
  }
  return strictly_better;
}

bool ParetoArchive::insert(const ObjectiveVector& p) {
  if (dimension_ == 0) dimension_ = p.size();
  require(p.size() == dimension_ && dimension_ > 0, "archive: dimension mismatch");
  check_finite(p);

  for (const auto& q : points_) {
    if (q == p || dominates(q, p)) return false;
  }
  std::erase_if(points_, [&](const ObjectiveVector& q) { return dominates(p, q); });
  points_.insert(std::lower_bound(points_.begin(), points_.end(), p), p);
  return true;
}

bool ParetoArchive::contains(std::span<const double> p) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p,
                             [](const ObjectiveVector& a, std::span<const double> b) {
                               return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                   b.end());
                             });
  return it != points_.end() && std::equal(it->begin(), it->end(), p.begin(), p.end());
}

ParetoArchive nondominated_filter(std::span<const ObjectiveVector> points) {
  if (points.empty()) return ParetoArchive{};
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    require(p.size() == dim && dim > 0, "nondominated_filter: dimension mismatch");
    check_finite(p);
  }

  // In descending lexicographic order a point can only be dominated by one
  // that precedes it, so a single pass against the survivors suffices.
  std::vector<const ObjectiveVector*> order;
  order.reserve(points.size());
  for (const auto& p : points) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return *b < *a; });

  std::vector<const ObjectiveVector*> kept;
  for (const auto* p : order) {
    if (!kept.empty() && *kept.back() == *p) continue;
    bool dominated = std::any_of(kept.begin(), kept.end(),
                                 [&](const ObjectiveVector* q) { return dominates(*q, *p); });
    if (!dominated) kept.push_back(p);
  }

  ParetoArchive out(dim);
  for (auto it = kept.rbegin(); it != kept.rend(); ++it) out.insert(**it);
  return out;
}

double hypervolume(std::span<const ObjectiveVector> points, std::span<const double> ref) {
  if (points.empty()) return 0.0;
  const std::size_t dim = ref.size();
  require(dim >= 1 && dim <= 3, "hypervolume: only 1 to 3 objectives are supported");
  auto pts = clipped(points, ref);

  if (dim == 1) {
    double best = ref[0];
    for (const auto& p : pts) best = std::max(best, p[0]);
    return best - ref[0];
  }

  if (dim == 2) {
    std::sort(pts.begin(), pts.end(), std::greater<>{});
    return sweep_2d(pts, ref[1], ref[0]);
  }

  // Three objectives: slice along the last axis from the top down. Between
  // consecutive levels the cross-section is the 2-D front of every point at
  // or above the upper level.
  std::sort(pts.begin(), pts.end(),
            [](const ObjectiveVector& a, const ObjectiveVector& b) { return a[2] > b[2]; });
  std::vector<ObjectiveVector> slice;
  double volume = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double lower = (k + 1 < pts.size()) ? pts[k + 1][2] : ref[2];
    auto pos = std::lower_bound(slice.begin(), slice.end(), pts[k], std::greater<>{});
    slice.insert(pos, pts[k]);
    const double height = pts[k][2] - lower;
    if (height > 0.0) volume += sweep_2d(slice, ref[1], ref[0]) * height;
  }
  return volume;
}

double hypervolume(const ParetoArchive& front, std::span<const double> ref) {
  return hypervolume(std::span<const ObjectiveVector>(front.points()), ref);
}

double sparsity(std::span<const ObjectiveVector> points) {
  const std::size_t n = points.size();
  if (n < 2) return 0.0;
  const std::size_t dim = points.front().size();
  double total = 0.0;
  std::vector<double> column(n);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      require(points[i].size() == dim, "sparsity: dimension mismatch");
      column[i] = points[i][j];
    }
    std::sort(column.begin(), column.end());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double gap = column[i + 1] - column[i];
      total += gap * gap;
    }
  }
  return total / static_cast<double>(n - 1);
}

double sparsity(const ParetoArchive& front) {
  return sparsity(std::span<const ObjectiveVector>(front.points()));
}

std::size_t cardinality(std::span<const ObjectiveVector> points) {
  return make_point_set({points.begin(), points.end()}).size();
}

std::size_t cardinality(const ParetoArchive& front) { return front.size(); }

std::optional<double> igd(std::span<const ObjectiveVector> approx,
                          std::span<const ObjectiveVector> truth) {
  require(!truth.empty(), "igd: the reference front must not be empty");
  if (approx.empty()) return std::nullopt;

  double sum = 0.0;
  for (const auto& z : truth) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& a : approx) {
      require(a.size() == z.size(), "igd: dimension mismatch");
      double d2 = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) d2 += (z[i] - a[i]) * (z[i] - a[i]);
      nearest = std::min(nearest, d2);
    }
    sum += std::sqrt(nearest);
  }
  return sum / static_cast<double>(truth.size());
}

std::optional<double> igd(const ParetoArchive& approx, std::span<const ObjectiveVector> truth) {
  return igd(std::span<const ObjectiveVector>(approx.points()), truth);
}

PointSet make_point_set(std::vector<ObjectiveVector> points) {
  const std::size_t dim = points.empty() ? 0 : points.front().size();
  for (const auto& p : points) {
    require(p.size() == dim && dim > 0, "point set: dimension mismatch");
    check_finite(p);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace morl
