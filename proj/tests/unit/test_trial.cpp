#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "duet/evolution.hpp"
#include "duet/trial.hpp"

using namespace duet;

namespace {

double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

CtrnnParams random_params(std::uint64_t seed, std::size_t active = 3) {
  Rng rng(seed);
  return decode(random_genome(rng, mutation_mask(active)), active);
}

}  // namespace

TEST_CASE("initial conditions") {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto poses = initial_conditions_for_seed(seed);
    CHECK(poses[0].position.x >= -20.0);
    CHECK(poses[0].position.x <= -5.0);
    CHECK(poses[1].position.x >= 5.0);
    CHECK(poses[1].position.x <= 20.0);
    for (const Pose& p : poses) {
      CHECK(std::abs(p.position.y) <= 20.0);
      CHECK(p.heading >= 0.0);
      CHECK(p.heading < 2 * std::numbers::pi);
    }
    CHECK(distance(poses[0].position, poses[1].position) >= 2 * kBodyRadius + 1.0);
  }
  CHECK(initial_conditions_for_seed(42) == initial_conditions_for_seed(42));
  CHECK_FALSE(initial_conditions_for_seed(42) == initial_conditions_for_seed(43));
}

TEST_CASE("trial_score examples") {
  const std::vector<double> still(100, 10.0);
  CHECK(trial_score(still, 10.0) == 0.0);
  const std::vector<double> contact(100, 0.0);
  CHECK(trial_score(contact, 10.0) == 1.0);
  std::vector<double> linear(1000);
  for (std::size_t t = 0; t < linear.size(); ++t) linear[t] = 10.0 * (1.0 - static_cast<double>(t + 1) / 1000.0);
  CHECK(trial_score(linear, 10.0) == doctest::Approx(0.5).epsilon(1e-3));
  const std::vector<double> fleeing(10, 20.0);
  CHECK(trial_score(fleeing, 10.0) == doctest::Approx(-1.0));
  CHECK(clamp_score(-1.0) == 0.0);
  CHECK(clamp_score(0.25) == 0.25);
}

TEST_CASE("weighted_fitness examples") {
  const std::vector<double> constant(10, 0.37);
  CHECK(weighted_fitness(constant) == doctest::Approx(0.37));

  std::vector<double> one_bad(10, 1.0);
  one_bad[0] = 0.0;
  const double oracle = (harmonic(10) - 1.0) / harmonic(10);
  CHECK(weighted_fitness(one_bad) == doctest::Approx(oracle));
  CHECK(weighted_fitness(one_bad) == doctest::Approx(0.6586).epsilon(1e-4));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> s(10);
    for (double& v : s) v = u(rng);
    const double f = weighted_fitness(s);
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / 10.0;
    CHECK(f <= mean + 1e-15);
    auto permuted = s;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    CHECK(weighted_fitness(permuted) == f);
    auto raised = s;
    raised[i % 10] += 0.1;
    CHECK(weighted_fitness(raised) >= f);
  }
}

TEST_CASE("zero-genome agents never move") {
  TrialConfig config;
  config.duration = 50.0;
  config.record_stride = 1;
  const auto record = run_trial(decode(Genome{}), config);
  CHECK(record.raw_score == 0.0);
  for (const auto& row : record.rows) {
    CHECK(row.distance == record.initial_distance);
    CHECK(row.agents[0].pose == record.rows.front().agents[0].pose);
  }
}

TEST_CASE("trial bookkeeping") {
  TrialConfig config;
  config.duration = 30.0;
  config.record_stride = 5;
  config.init_poses = initial_conditions_for_seed(3);
  const auto record = run_trial(random_params(11), config);
  CHECK(record.rows.size() == 300 / 5 + 1);
  for (std::size_t i = 1; i < record.rows.size(); ++i) CHECK(record.rows[i].time > record.rows[i - 1].time);
  for (const auto& row : record.rows) CHECK(row.distance >= 0.0);
  CHECK(record.clamped_score == clamp_score(record.raw_score));

  config.duration = 0.25;
  CHECK_THROWS_AS(config.steps(), std::invalid_argument);
}

TEST_CASE("trials are deterministic") {
  TrialConfig config;
  config.duration = 100.0;
  config.init_poses = initial_conditions_for_seed(8);
  const CtrnnParams params = random_params(21);
  CHECK(run_trial(params, config) == run_trial(params, config));
}

TEST_CASE("ghost trial matches the normal trial until the first collision") {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 60 && compared < 5; ++seed) {
    TrialConfig config;
    config.duration = 200.0;
    config.record_stride = 1;
    config.init_poses = initial_conditions_for_seed(seed);
    const CtrnnParams params = random_params(1000 + seed);
    const auto normal = run_trial(params, config);
    if (!normal.first_collision_step) continue;
    config.collisions_enabled = false;
    const auto ghost = run_trial(params, config);
    ++compared;
    const std::size_t first = *normal.first_collision_step;
    for (std::size_t i = 0; i < first; ++i) {
      REQUIRE(normal.rows[i].agents == ghost.rows[i].agents);
      REQUIRE(normal.rows[i].distance == ghost.rows[i].distance);
    }
    CHECK(ghost.collision_events == 0);
  }
  CHECK(compared > 0);
}

TEST_CASE("no interpenetration in coupled trials") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TrialConfig config;
    config.duration = 200.0;
    config.record_stride = 1;
    config.init_poses = initial_conditions_for_seed(seed);
    const auto record = run_trial(random_params(500 + seed), config);
    for (const auto& row : record.rows) CHECK(row.distance >= 2 * kBodyRadius - kContactTolerance);
  }
}

TEST_CASE("evaluate_solution") {
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  TrialConfig base;
  base.duration = 50.0;
  const CtrnnParams params = random_params(77);
  const auto e = evaluate_solution(params, seeds, base);
  CHECK(e.scores.size() == 10);
  CHECK(e.fitness == weighted_fitness(e.scores));
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    TrialConfig c = base;
    c.init_poses = initial_conditions_for_seed(seeds[i]);
    CHECK(e.scores[i] == run_trial(params, c).clamped_score);
  }
}

TEST_CASE("isolated agent") {
  TrialConfig config;
  config.duration = 20.0;
  config.record_stride = 2;
  const auto record = run_isolated(random_params(3), config);
  CHECK(record.agent_count == 1);
  CHECK(record.rows.size() == 101);
  for (const auto& row : record.rows) CHECK(row.agents[0].inputs == SensorInputs{0.0, 0.0});
}
