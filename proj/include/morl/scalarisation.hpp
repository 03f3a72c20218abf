#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morl/pareto.hpp"
#include "morl/random.hpp"

namespace morl {

/// Non-negative preference weights summing to one (within 1e-9).
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> weights);

  std::span<const double> values() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> weights_;
};

enum class ScalariserKind { Linear, Chebyshev };

ScalariserKind parse_scalariser(std::string_view token);
std::string to_string(ScalariserKind kind);

double linear_scalarise(std::span<const double> q, const WeightVector& w);

/// max_o w_o * |q_o - z_o|; smaller is better.
double chebyshev_scalarise(std::span<const double> q, const WeightVector& w,
                           std::span<const double> utopian);

/// Per-objective best value seen so far, offset by tau to give the utopian
/// point of the Chebyshev scalarisation. Starts at -inf on every objective.
class UtopianTracker {
 public:
  UtopianTracker() = default;
  UtopianTracker(std::size_t dimension, double tau);

  void update(std::span<const double> q);

  std::span<const double> best() const { return best_; }
  std::span<const double> utopian() const { return utopian_; }
  double tau() const { return tau_; }

 private:
  double tau_ = 0.0;
  std::vector<double> best_;
  std::vector<double> utopian_;
};

/// Read-only view over the Q-vectors of every action in one state, stored
/// contiguously action-major.
class QRow {
 public:
  QRow(std::span<const double> data, std::size_t dimension);

  std::size_t actions() const { return data_.size() / dimension_; }
  std::size_t dimension() const { return dimension_; }
  std::span<const double> operator[](std::size_t action) const {
    return data_.subspan(action * dimension_, dimension_);
  }
  std::span<const double> data() const { return data_; }

 private:
  std::span<const double> data_;
  std::size_t dimension_;
};

/// Greedy action under the chosen scalariser: argmax of the weighted sum,
/// or argmin of the Chebyshev distance to `utopian`. Ties are broken
/// uniformly with `rng`.
std::size_t greedy_action(ScalariserKind kind, const QRow& row, const WeightVector& w,
                          std::span<const double> utopian, Rng& rng);

}  // namespace morl
