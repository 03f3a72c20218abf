#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "morl/error.hpp"
#include "morl/pareto.hpp"
#include "support.hpp"

using namespace morl;
using morl::testing::brute_force_nd;
using morl::testing::inclusion_exclusion_hv;
using morl::testing::monte_carlo_hv;

namespace {

std::vector<ObjectiveVector> random_points(std::mt19937& gen, std::size_t n, std::size_t dim, int lo,
                                           int hi) {
  std::uniform_int_distribution<int> coord(lo, hi);
  std::vector<ObjectiveVector> pts(n, ObjectiveVector(dim));
  for (auto& p : pts) {
    for (auto& v : p) v = coord(gen);
  }
  return pts;
}

PointSet dst_points() {
  const double g = 0.9;
  const std::pair<double, int> treasures[] = {{1, 1},  {2, 3},  {3, 5},  {5, 7},  {8, 8},
                                              {16, 9}, {24, 13}, {50, 14}, {74, 17}, {124, 19}};
  std::vector<ObjectiveVector> pts;
  for (auto [v, n] : treasures) pts.push_back({v * std::pow(g, n - 1), -(1 - std::pow(g, n)) / (1 - g)});
  return make_point_set(pts);
}

}  // namespace

TEST_CASE("dominates") {
  CHECK(dominates(ObjectiveVector{2, 3}, ObjectiveVector{1, 3}));
  CHECK_FALSE(dominates(ObjectiveVector{1, 2}, ObjectiveVector{2, 1}));
  CHECK_FALSE(dominates(ObjectiveVector{2, 1}, ObjectiveVector{1, 2}));
  CHECK_FALSE(dominates(ObjectiveVector{1, -1}, ObjectiveVector{18.61, -8.64}));
  CHECK_FALSE(dominates(ObjectiveVector{18.61, -8.64}, ObjectiveVector{1, -1}));
  CHECK_FALSE(dominates(ObjectiveVector{1, 1}, ObjectiveVector{1, 1}));
  CHECK_THROWS_AS(dominates(ObjectiveVector{1, 2}, ObjectiveVector{1, 2, 3}), ContractViolation);
}

TEST_CASE("dominance is antisymmetric and transitive on random triples") {
  std::mt19937 gen(7);
  for (int k = 0; k < 2000; ++k) {
    const auto pts = random_points(gen, 3, 3, 0, 4);
    const auto &a = pts[0], &b = pts[1], &c = pts[2];
    CHECK_FALSE((dominates(a, b) && dominates(b, a)));
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
  }
}

TEST_CASE("nondominated_filter examples") {
  const auto f = nondominated_filter(std::vector<ObjectiveVector>{{1, 2}, {2, 1}, {0, 0}});
  CHECK(f.points() == std::vector<ObjectiveVector>{{1, 2}, {2, 1}});
  CHECK(nondominated_filter(std::vector<ObjectiveVector>{{5, 5}}).points() ==
        std::vector<ObjectiveVector>{{5, 5}});
  CHECK(nondominated_filter(std::vector<ObjectiveVector>{}).empty());
  CHECK(nondominated_filter(std::vector<ObjectiveVector>{{1, 1}, {1, 1}}).size() == 1);
  CHECK_THROWS_AS(nondominated_filter(std::vector<ObjectiveVector>{{1, 1}, {1, 2, 3}}), ContractViolation);
}

TEST_CASE("nondominated_filter matches the pairwise oracle on 1000 random instances") {
  std::mt19937 gen(2024);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t dim = 2 + k % 3;
    const auto pts = random_points(gen, 1 + gen() % 60, dim, 0, 10);
    REQUIRE(nondominated_filter(pts).points() == brute_force_nd(pts));
  }
}

TEST_CASE("nondominated_filter is idempotent and permutation invariant") {
  std::mt19937 gen(99);
  for (int k = 0; k < 200; ++k) {
    auto pts = random_points(gen, 40, 2 + k % 2, 0, 10);
    const auto once = nondominated_filter(pts);
    CHECK(nondominated_filter(once.points()) == once);
    std::shuffle(pts.begin(), pts.end(), gen);
    CHECK(nondominated_filter(pts) == once);
  }
}

TEST_CASE("archive insertion") {
  ParetoArchive a;
  CHECK(a.insert({1, 1}));
  CHECK_FALSE(a.insert({1, 1}));
  CHECK_FALSE(a.insert({0, 1}));
  CHECK(a.insert({0, 2}));
  CHECK(a.insert({2, 2}));  // evicts both
  CHECK(a.points() == std::vector<ObjectiveVector>{{2, 2}});
  CHECK(a.contains(ObjectiveVector{2, 2}));
  CHECK_THROWS_AS(a.insert({1, 2, 3}), ContractViolation);
  CHECK_THROWS_AS(a.insert({NAN, 1}), ContractViolation);
}

TEST_CASE("hypervolume examples") {
  CHECK(hypervolume(nondominated_filter(std::vector<ObjectiveVector>{{1, 1}}), ObjectiveVector{0, 0}) ==
        doctest::Approx(1.0));
  CHECK(hypervolume(nondominated_filter(std::vector<ObjectiveVector>{{2, 1}, {1, 2}}),
                    ObjectiveVector{0, 0}) == doctest::Approx(3.0));
  CHECK(hypervolume(ParetoArchive{}, ObjectiveVector{0, 0}) == 0.0);
  CHECK(hypervolume(std::vector<ObjectiveVector>{{4}}, ObjectiveVector{1}) == doctest::Approx(3.0));
  CHECK(hypervolume(std::vector<ObjectiveVector>{{2, 2, 2}}, ObjectiveVector{0, 0, 0}) ==
        doctest::Approx(8.0));
  CHECK(hypervolume(dst_points(), ObjectiveVector{0, -50}) == doctest::Approx(801.842).epsilon(1e-5));
}

TEST_CASE("hypervolume clips coordinates below the reference point") {
  CHECK(hypervolume(std::vector<ObjectiveVector>{{-1, 5}}, ObjectiveVector{0, 0}) == 0.0);
  CHECK(hypervolume(std::vector<ObjectiveVector>{{-1, 5}, {2, 2}}, ObjectiveVector{0, 0}) ==
        doctest::Approx(4.0));
}

TEST_CASE("hypervolume rejects unsupported input") {
  CHECK_THROWS_AS(hypervolume(std::vector<ObjectiveVector>{{1, 1, 1, 1}}, ObjectiveVector{0, 0, 0, 0}),
                  ContractViolation);
  CHECK_THROWS_AS(hypervolume(std::vector<ObjectiveVector>{{1, 1}}, ObjectiveVector{0, 0, 0}),
                  ContractViolation);
}

TEST_CASE("2-D hypervolume equals inclusion-exclusion on random fronts up to 12 points") {
  std::mt19937 gen(11);
  for (int k = 0; k < 500; ++k) {
    const auto front = nondominated_filter(random_points(gen, 1 + gen() % 30, 2, -5, 15));
    if (front.size() > 12) continue;
    const std::vector<double> ref{-5.0 - static_cast<double>(gen() % 3), -5.0};
    REQUIRE(hypervolume(front, ref) == doctest::Approx(inclusion_exclusion_hv(front.points(), ref)));
  }
}

TEST_CASE("3-D hypervolume equals inclusion-exclusion on random fronts") {
  std::mt19937 gen(12);
  for (int k = 0; k < 300; ++k) {
    const auto front = nondominated_filter(random_points(gen, 1 + gen() % 12, 3, 0, 9));
    const std::vector<double> ref{-1, -1, -1};
    REQUIRE(hypervolume(front, ref) == doctest::Approx(inclusion_exclusion_hv(front.points(), ref)));
  }
}

TEST_CASE("3-D hypervolume agrees with a Monte-Carlo estimate") {
  std::mt19937 gen(13);
  for (int k = 0; k < 8; ++k) {
    const auto front = nondominated_filter(random_points(gen, 1 + k, 3, 0, 9));
    const std::vector<double> ref{-1, -1, -1};
    const auto mc = monte_carlo_hv(front.points(), ref, 1'000'000, 1000 + k);
    CHECK(std::abs(hypervolume(front, ref) - mc.value) <= 3.0 * mc.standard_error + 1e-9);
  }
}

TEST_CASE("hypervolume is monotone") {
  std::mt19937 gen(14);
  for (int k = 0; k < 300; ++k) {
    const std::size_t dim = 2 + k % 2;
    auto pts = random_points(gen, 8, dim, 0, 10);
    const ObjectiveVector ref(dim, -1.0);
    const auto front = nondominated_filter(pts);
    const double before = hypervolume(front, ref);
    const auto extra = random_points(gen, 1, dim, 0, 10).front();
    pts.push_back(extra);
    const double after = hypervolume(nondominated_filter(pts), ref);
    if (std::any_of(front.begin(), front.end(), [&](const auto& p) { return dominates(p, extra) || p == extra; })) {
      CHECK(after == doctest::Approx(before));
    } else {
      CHECK(after >= before - 1e-9);
    }
  }
}

TEST_CASE("sparsity") {
  CHECK(sparsity(nondominated_filter(std::vector<ObjectiveVector>{{3, 4}})) == 0.0);
  CHECK(sparsity(ParetoArchive{}) == 0.0);
  CHECK(sparsity(std::vector<ObjectiveVector>{{0, 0}, {1, 1}}) == doctest::Approx(2.0));
  CHECK(sparsity(dst_points()) == doctest::Approx(8.757).epsilon(1e-4));
}

TEST_CASE("cardinality") {
  CHECK(cardinality(ParetoArchive{}) == 0);
  CHECK(cardinality(dst_points()) == 10);
  CHECK(cardinality(nondominated_filter(dst_points())) == 9);
}

TEST_CASE("igd") {
  const std::vector<ObjectiveVector> truth{{0, 0}, {2, 0}};
  CHECK(igd(std::vector<ObjectiveVector>{{0, 0}}, truth).value() == doctest::Approx(1.0));
  CHECK(igd(truth, truth).value() == 0.0);
  CHECK_FALSE(igd(std::vector<ObjectiveVector>{}, truth).has_value());
  CHECK(igd(dst_points(), dst_points()).value() == 0.0);
}

TEST_CASE("igd is zero exactly when the truth is contained in the approximation") {
  std::mt19937 gen(15);
  for (int k = 0; k < 300; ++k) {
    const auto truth = random_points(gen, 1 + gen() % 5, 2, 0, 5);
    const auto approx = random_points(gen, 1 + gen() % 8, 2, 0, 5);
    const bool contained = std::all_of(truth.begin(), truth.end(), [&](const auto& t) {
      return std::find(approx.begin(), approx.end(), t) != approx.end();
    });
    CHECK((igd(approx, truth).value() == 0.0) == contained);
  }
}
