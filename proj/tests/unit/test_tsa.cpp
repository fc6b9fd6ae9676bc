#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "duet/synthetic.hpp"
#include "duet/tsa.hpp"

using namespace duet;
using namespace duet::tsa;

namespace {

TimeSeries series_of(std::vector<double> v, double dt = 1.0) { return TimeSeries{std::move(v), dt}; }

TimeSeries reversed(const TimeSeries& s) {
  TimeSeries r = s;
  std::reverse(r.values.begin(), r.values.end());
  return r;
}

}  // namespace

TEST_CASE("delay_embed examples") {
  const auto e = delay_embed(series_of({1, 2, 3, 4}), 2, 1);
  REQUIRE(e.count == 3);
  CHECK(e.coords == std::vector<double>{1, 2, 2, 3, 3, 4});

  const auto identity = delay_embed(series_of({5, 6, 7}), 1, 3);
  CHECK(identity.coords == std::vector<double>{5, 6, 7});

  std::vector<double> ramp(1000);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = double(i);
  const auto e3 = delay_embed(series_of(ramp), 3, 7);
  CHECK(e3.count == 986);
  CHECK(e3.point(10)[2] == 24.0);

  CHECK_THROWS_AS(delay_embed(series_of({1, 2, 3}), 2, 3), AnalysisError);
  CHECK_THROWS_AS(delay_embed(series_of({1, 2, 3}), 0, 1), AnalysisError);
}

TEST_CASE("mutual information delay") {
  const auto sine = synthetic::sine(20000, 100.0);
  const auto d = mutual_information_delay(sine, 100);
  CHECK(d.delay >= 20);
  CHECK(d.delay <= 30);
  CHECK(d.mutual_information.size() == 101);

  const auto noise = synthetic::white_noise(20000, 7);
  CHECK(mutual_information_delay(noise, 100).delay == 1);

  const auto constant = series_of(std::vector<double>(5000, 2.0));
  CHECK_THROWS_WITH_AS(mutual_information_delay(constant, 100), "zero-variance series", AnalysisError);
  CHECK_THROWS_AS(mutual_information_delay(sine, 5000), AnalysisError);
}

TEST_CASE("mean period") {
  const auto sine = synthetic::sine(10000, 40.0);
  const auto p = mean_period(sine.values);
  REQUIRE(p.has_value());
  CHECK(*p == doctest::Approx(40.0).epsilon(0.01));
  const std::vector<double> ramp{1, 2, 3, 4, 5};
  CHECK_FALSE(mean_period(ramp).has_value());
}

TEST_CASE("nearest neighbour respects the Theiler window") {
  const auto sine = synthetic::sine(2000, 50.3);
  std::vector<double> scratch;
  const auto n = nearest_neighbour(sine.values, 2, 12, 500, 1900, 30, scratch);
  REQUIRE(n.has_value());
  CHECK(std::abs(double(n->index) - 500.0) > 30.0);
  CHECK(n->sq_distance > 0.0);
  // Brute-force oracle.
  double best = INFINITY;
  for (std::size_t j = 0; j < 1900; ++j) {
    if (j + 30 >= 500 && j <= 530) continue;
    double d = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      const double diff = sine.values[j + 12 * k] - sine.values[500 + 12 * k];
      d += diff * diff;
    }
    if (d > 0.0) best = std::min(best, d);
  }
  CHECK(n->sq_distance == best);
}

TEST_CASE("false nearest neighbours") {
  const auto sine = synthetic::sine(20000, 100.0);
  const auto fnn = false_nearest_neighbors(sine, 25, 6);
  REQUIRE(fnn.embedding_dim.has_value());
  CHECK(*fnn.embedding_dim == 2);
  for (double f : fnn.fractions) {
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  CHECK(fnn.fractions[1] < 0.01);
  CHECK(fnn.fractions[2] <= 0.05);

  const auto noise = synthetic::white_noise(5000, 3);
  const auto noisy = false_nearest_neighbors(noise, 1, 5);
  CHECK_FALSE(noisy.embedding_dim.has_value());

  CHECK_THROWS_AS(false_nearest_neighbors(synthetic::sine(400, 20.0), 5, 3), AnalysisError);
}

TEST_CASE("largest Lyapunov exponent signs") {
  const auto logistic = synthetic::logistic_map(5000);
  CHECK(largest_lyapunov(logistic, 1, 1).exponent == doctest::Approx(std::numbers::ln2).epsilon(0.05 / 0.693));

  const auto sine = synthetic::sine(20000, 100.0);
  CHECK(std::abs(largest_lyapunov(sine, 2, 25).exponent) < 0.02);

  // Relaxation toward a fixed point at rate 0.005 per sample, 0.05 per time unit.
  std::vector<double> decay(3000);
  for (std::size_t i = 0; i < decay.size(); ++i) decay[i] = 0.7 + 0.5 * std::exp(-0.005 * double(i));
  CHECK(largest_lyapunov(series_of(decay, 0.1), 2, 5).exponent == doctest::Approx(-0.05).epsilon(1e-3));

  CHECK_THROWS_WITH_AS(largest_lyapunov(synthetic::logistic_map(500), 1, 1), "insufficient data", AnalysisError);
}

TEST_CASE("determinism test") {
  std::vector<double> line(1000);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = double(i);
  CHECK(determinism_test(series_of(line), 2, 1).k == doctest::Approx(1.0).epsilon(1e-12));

  const auto henon = synthetic::henon_map(5000);
  const auto k = determinism_test(henon, 2, 1);
  CHECK(k.k > 0.0);
  CHECK(k.k <= 1.0);
  CHECK(k.passes > 0);

  CHECK_THROWS_AS(determinism_test(series_of(std::vector<double>(100, 1.0)), 2, 1), AnalysisError);
}

TEST_CASE("determinism k is invariant under rescaling and time reversal") {
  for (const TimeSeries& s : {synthetic::henon_map(4000), synthetic::sine(4000, 37.3), synthetic::logistic_map(4000)}) {
    const double k = determinism_test(s, 2, 1).k;
    for (double scale : {1e-3, 2.5, 1e4}) {
      TimeSeries scaled = s;
      for (double& v : scaled.values) v *= scale;
      CHECK(std::abs(determinism_test(scaled, 2, 1).k - k) <= 1e-12);
    }
    CHECK(determinism_test(reversed(s), 2, 1).k == doctest::Approx(k).epsilon(1e-12));
  }
}

TEST_CASE("analysis pipeline") {
  const auto logistic = synthetic::logistic_map(5000);
  const auto report = analyze(logistic);
  CHECK(report.delay.delay == 1);
  CHECK(report.lyapunov.exponent > 0.6);
  CHECK(report.classification == "chaotic");

  auto bad = logistic;
  bad.values[100] = NAN;
  CHECK_THROWS_AS(analyze(bad), AnalysisError);
}
