#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "morl/environment.hpp"
#include "morl/error.hpp"
#include "morl/pql_agent.hpp"
#include "support.hpp"

using namespace morl;
using morl::testing::approx_equal_sets;
using morl::testing::brute_force_nd;
using morl::testing::enumerate_returns;
using morl::testing::random_dag;
using morl::testing::TableMdp;
using morl::testing::treasure_chain;

namespace {

PqlConfig config_for(std::size_t objectives, std::size_t steps) {
  PqlConfig c;
  c.gamma = 0.9;
  c.total_timesteps = steps;
  c.set_eval.ref = ObjectiveVector(objectives, -100.0);
  c.eval_interval = steps;
  return c;
}

std::vector<ObjectiveVector> pts(const ParetoArchive& a) { return a.points(); }

}  // namespace

TEST_CASE("set evaluation names") {
  CHECK(parse_set_eval("hypervolume") == SetEvalMode::Hypervolume);
  CHECK(parse_set_eval("cardinality") == SetEvalMode::Cardinality);
  CHECK(parse_set_eval("pareto") == SetEvalMode::Pareto);
  CHECK_THROWS_AS(parse_set_eval("volume"), ContractViolation);
  CHECK_THROWS_AS((SetEvaluation{SetEvalMode::Hypervolume, std::nullopt}.validate()), ContractViolation);
  CHECK_THROWS_AS((SetEvaluation{SetEvalMode::Pareto, ObjectiveVector{0, 0}}.validate()), ContractViolation);
}

TEST_CASE("q-sets") {
  QSetStore store(2, 2, 2);
  CHECK(store.qset(0, 0, 0.9).empty());

  store.update(1, 0, std::vector<double>{1, -1}, 1, true, 0.9);
  CHECK(store.visits(1, 0) == 1);
  CHECK(pts(store.qset(1, 0, 0.9)) == std::vector<ObjectiveVector>{{1, -1}});
  CHECK(store.future_front(1, 0).empty());

  store.update(1, 1, std::vector<double>{2, -3}, 1, true, 0.9);
  store.update(0, 0, std::vector<double>{0, -1}, 1, false, 0.9);
  CHECK(pts(store.future_front(0, 0)) == std::vector<ObjectiveVector>{{1, -1}, {2, -3}});
  const auto q = pts(store.qset(0, 0, 0.9));
  REQUIRE(q.size() == 2);
  CHECK(q[0][0] == doctest::Approx(0.9));
  CHECK(q[0][1] == doctest::Approx(-1.9));
  CHECK(q[1][0] == doctest::Approx(1.8));
  CHECK(q[1][1] == doctest::Approx(-3.7));
}

TEST_CASE("mean rewards") {
  QSetStore store(1, 1, 2);
  store.update(0, 0, std::vector<double>{0, -1}, 0, true, 0.9);
  store.update(0, 0, std::vector<double>{2, -1}, 0, true, 0.9);
  CHECK(store.mean_reward(0, 0)[0] == 1.0);
  CHECK(store.mean_reward(0, 0)[1] == -1.0);

  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-5, 5);
  QSetStore s2(1, 1, 1);
  double sum = 0.0;
  for (int k = 1; k <= 500; ++k) {
    const double r = u(gen);
    sum += r;
    s2.update(0, 0, std::vector<double>{r}, 0, true, 0.9);
    CHECK(std::abs(s2.mean_reward(0, 0)[0] - sum / k) <= 1e-12);
  }
}

TEST_CASE("action set scoring") {
  const SetEvaluation hv{SetEvalMode::Hypervolume, ObjectiveVector{0, 0}};
  std::vector<ParetoArchive> sets{ParetoArchive(2), nondominated_filter(std::vector<ObjectiveVector>{{1, 1}}),
                                  nondominated_filter(std::vector<ObjectiveVector>{{2, 2}})};
  CHECK(evaluate_action_sets(sets, hv) == std::vector<double>{0, 1, 4});

  std::vector<ParetoArchive> mixed{nondominated_filter(std::vector<ObjectiveVector>{{3, 0}, {0, 3}, {1, 1}}),
                                   nondominated_filter(std::vector<ObjectiveVector>{{2, 2}}),
                                   nondominated_filter(std::vector<ObjectiveVector>{{0, 0}})};
  CHECK(evaluate_action_sets(mixed, {SetEvalMode::Cardinality, std::nullopt}) == std::vector<double>{2, 1, 0});
  CHECK(evaluate_action_sets(mixed, {SetEvalMode::Pareto, std::nullopt}) == std::vector<double>{1, 1, 0});
}

TEST_CASE("acting") {
  TableMdp mdp = treasure_chain();
  SUBCASE("unvisited actions tie") {
    PqlAgent agent(mdp.spec(), config_for(2, 10), Rng(1));
    std::array<int, 2> counts{};
    for (int k = 0; k < 10'000; ++k) ++counts[agent.act(0, 0.0)];
    for (int c : counts) CHECK(std::abs(c / 10'000.0 - 0.5) <= 0.025);
  }
  SUBCASE("a strictly better set is always chosen") {
    PqlAgent agent(mdp.spec(), config_for(2, 10), Rng(1));
    agent.update(0, 1, std::vector<double>{5, -1}, 0, true);
    agent.update(0, 0, std::vector<double>{1, -1}, 0, true);
    for (int k = 0; k < 100; ++k) CHECK(agent.act(0, 0.0) == 1);
  }
}

TEST_CASE("converged fronts equal exhaustive path enumeration") {
  SUBCASE("treasure chain") {
    const TableMdp mdp = treasure_chain();
    const auto truth = brute_force_nd(enumerate_returns(mdp, 0.9));
    CHECK(truth.size() == 3);
    const PqlRun run = train_pql(mdp, config_for(2, 5000), 1);
    CHECK(approx_equal_sets(run.timeline.back().front.points(), truth, 1e-9));
  }
  SUBCASE("random two-objective DAG") {
    const TableMdp mdp = random_dag(12, 2, 2, 17);
    const auto truth = brute_force_nd(enumerate_returns(mdp, 0.9));
    const PqlRun run = train_pql(mdp, config_for(2, 30'000), 2);
    CHECK(truth.size() > 1);
    CHECK(approx_equal_sets(run.timeline.back().front.points(), truth, 1e-9));
  }
  SUBCASE("random three-objective DAG") {
    const TableMdp mdp = random_dag(8, 3, 3, 23);
    const auto truth = brute_force_nd(enumerate_returns(mdp, 0.9));
    const PqlRun run = train_pql(mdp, config_for(3, 30'000), 3);
    CHECK(truth.size() > 1);
    CHECK(approx_equal_sets(run.timeline.back().front.points(), truth, 1e-9));
  }
}

TEST_CASE("store invariants hold throughout training") {
  const TableMdp mdp = random_dag(10, 3, 2, 5);
  PqlAgent agent(mdp.spec(), config_for(2, 10), Rng(4));
  auto env = mdp.clone();
  std::size_t s = env->reset();
  for (int t = 0; t < 3000; ++t) {
    const std::size_t a = agent.act(s, 0.5);
    const auto out = env->step(a);
    agent.update(s, a, out.reward, out.next_state, out.terminated);
    const QSetStore& store = agent.store();
    const ParetoArchive& f = store.future_front(s, a);
    CHECK(nondominated_filter(f.points()) == f);
    const std::size_t q = store.qset(s, a, 0.9).size();
    CHECK(q == (f.empty() ? 1 : f.size()));
    s = (out.terminated || out.truncated) ? env->reset() : out.next_state;
  }
}

TEST_CASE("capacity limit") {
  FourRoom fr;
  CHECK_THROWS_AS(check_pql_capacity(fr.spec(), kDefaultStateCap), CapacityError);
  CHECK_THROWS_WITH(check_pql_capacity(fr.spec(), kDefaultStateCap), doctest::Contains("does not scale"));
  CHECK_NOTHROW(check_pql_capacity(fr.spec(), 1'000'000));
  CHECK_THROWS_AS(PqlAgent(fr.spec(), config_for(3, 10), Rng(1)), CapacityError);
  DeepSeaTreasure dst;
  CHECK_NOTHROW(check_pql_capacity(dst.spec(), kDefaultStateCap));
}

TEST_CASE("concave map converges to the non-dominated treasure set") {
  DeepSeaTreasure dst;
  PqlConfig c = config_for(2, 400'000);
  c.set_eval.ref = ObjectiveVector{0, -50};
  c.eval_interval = 100'000;
  const PqlRun run = train_pql(dst, c, 42);
  const ParetoArchive truth = nondominated_filter(dst_true_front(dst.map(), 0.9));
  CHECK(approx_equal_sets(run.timeline.back().front.points(), truth.points(), 1e-9));

  // The greedy first move is "right"; its Q-set holds every optimal point
  // except (1, -1), which only "down" reaches.
  const std::size_t start = dst.start_state();
  std::vector<ParetoArchive> sets;
  for (std::size_t a = 0; a < kGridActions; ++a) sets.push_back(run.store.qset(start, a, 0.9));
  const auto scores = evaluate_action_sets(sets, c.set_eval);
  const auto best = static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
  CHECK(best == kRight);
  CHECK(sets[kRight].size() == 8);
  CHECK(pts(sets[kDown]) == std::vector<ObjectiveVector>{{1, -1}});
}
