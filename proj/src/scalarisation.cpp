#include "morl/scalarisation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "morl/error.hpp"

namespace morl {

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  require(!weights_.empty(), "weights: at least one objective is required");
  for (double w : weights_) {
    require(std::isfinite(w) && w >= 0.0 && w <= 1.0, "weights must lie in [0, 1]");
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  require(std::abs(total - 1.0) <= 1e-9, "weights must sum to 1");
}

ScalariserKind parse_scalariser(std::string_view token) {
  if (token == "linear") return ScalariserKind::Linear;
  if (token == "chebyshev") return ScalariserKind::Chebyshev;
  throw ContractViolation("unknown scalariser '" + std::string(token) +
                          "' (expected linear or chebyshev)");
}

std::string to_string(ScalariserKind kind) {
  return kind == ScalariserKind::Linear ? "linear" : "chebyshev";
}

double linear_scalarise(std::span<const double> q, const WeightVector& w) {
  require(q.size() == w.size(), "linear_scalarise: dimension mismatch");
  double sum = 0.0;
  for (std::size_t o = 0; o < q.size(); ++o) sum += w[o] * q[o];
  return sum;
}

double chebyshev_scalarise(std::span<const double> q, const WeightVector& w,
                           std::span<const double> utopian) {
  require(q.size() == w.size() && q.size() == utopian.size(),
          "chebyshev_scalarise: dimension mismatch");
  double worst = 0.0;
  for (std::size_t o = 0; o < q.size(); ++o) {
    if (w[o] == 0.0) continue;
    worst = std::max(worst, w[o] * std::abs(q[o] - utopian[o]));
  }
  return worst;
}

UtopianTracker::UtopianTracker(std::size_t dimension, double tau)
    : tau_(tau),
      best_(dimension, -std::numeric_limits<double>::infinity()),
      utopian_(dimension, -std::numeric_limits<double>::infinity()) {
  require(tau >= 0.0, "tau must be non-negative");
}

void UtopianTracker::update(std::span<const double> q) {
  require(q.size() == best_.size(), "utopian tracker: dimension mismatch");
  for (std::size_t o = 0; o < q.size(); ++o) {
    if (q[o] > best_[o]) {
      best_[o] = q[o];
      utopian_[o] = q[o] + tau_;
    }
  }
}

QRow::QRow(std::span<const double> data, std::size_t dimension)
    : data_(data), dimension_(dimension) {
  require(dimension > 0 && data.size() % dimension == 0, "QRow: malformed row");
}

std::size_t greedy_action(ScalariserKind kind, const QRow& row, const WeightVector& w,
                          std::span<const double> utopian, Rng& rng) {
  const std::size_t n = row.actions();
  require(n > 0, "greedy_action: empty action set");
  if (kind == ScalariserKind::Chebyshev) {
    for (double z : utopian) require(std::isfinite(z), "greedy_action: utopian point not set");
  }

  // Oriented so that larger is better for both scalarisers.
  auto score = [&](std::size_t a) {
    return kind == ScalariserKind::Linear ? linear_scalarise(row[a], w)
                                          : -chebyshev_scalarise(row[a], w, utopian);
  };

  double best = score(0);
  std::size_t first = 0;
  std::size_t tie_count = 1;
  for (std::size_t a = 1; a < n; ++a) {
    const double s = score(a);
    if (s > best) {
      best = s;
      first = a;
      tie_count = 1;
    } else if (s == best) {
      ++tie_count;
    }
  }
  if (tie_count == 1) return first;

  std::size_t pick = rng.uniform_index(tie_count);
  for (std::size_t a = first; a < n; ++a) {
    if (score(a) == best && pick-- == 0) return a;
  }
  return first;  // unreachable
}

}  // namespace morl
