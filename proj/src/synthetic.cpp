#include "duet/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "duet/random.hpp"

namespace duet::synthetic {

tsa::TimeSeries logistic_map(std::size_t n, double x0, std::size_t discard) {
  tsa::TimeSeries s{{}, 1.0};
  s.values.reserve(n);
  double x = x0;
  for (std::size_t t = 0; t < discard + n; ++t) {
    x = 4.0 * x * (1.0 - x);
    if (t >= discard) s.values.push_back(x);
  }
  return s;
}

tsa::TimeSeries henon_map(std::size_t n, std::size_t discard) {
  tsa::TimeSeries s{{}, 1.0};
  s.values.reserve(n);
  double x = 0.1;
  double y = 0.1;
  for (std::size_t t = 0; t < discard + n; ++t) {
    const double nx = 1.0 - 1.4 * x * x + y;
    y = 0.3 * x;
    x = nx;
    if (t >= discard) s.values.push_back(x);
  }
  return s;
}

tsa::TimeSeries lorenz_x(std::size_t n, double dt, std::size_t discard) {
  using State = std::array<double, 3>;
  auto f = [](const State& u) -> State {
    return {10.0 * (u[1] - u[0]), u[0] * (28.0 - u[2]) - u[1], u[0] * u[1] - 8.0 / 3.0 * u[2]};
  };
  auto shifted = [](const State& u, const State& k, double h) -> State {
    return {u[0] + h * k[0], u[1] + h * k[1], u[2] + h * k[2]};
  };
  tsa::TimeSeries s{{}, dt};
  s.values.reserve(n);
  State u{1.0, 1.0, 1.0};
  for (std::size_t t = 0; t < discard + n; ++t) {
    const State k1 = f(u);
    const State k2 = f(shifted(u, k1, 0.5 * dt));
    const State k3 = f(shifted(u, k2, 0.5 * dt));
    const State k4 = f(shifted(u, k3, dt));
    for (std::size_t i = 0; i < 3; ++i) u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (t >= discard) s.values.push_back(u[0]);
  }
  return s;
}

tsa::TimeSeries sine(std::size_t n, double samples_per_period) {
  tsa::TimeSeries s{std::vector<double>(n), 1.0};
  for (std::size_t t = 0; t < n; ++t) {
    s.values[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / samples_per_period);
  }
  return s;
}

tsa::TimeSeries white_noise(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::validation, {1});
  std::normal_distribution<double> normal(0.0, 1.0);
  tsa::TimeSeries s{std::vector<double>(n), 1.0};
  for (double& v : s.values) v = normal(rng);
  return s;
}

tsa::TimeSeries shuffled(const tsa::TimeSeries& series, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::validation, {2});
  tsa::TimeSeries s = series;
  std::shuffle(s.values.begin(), s.values.end(), rng);
  return s;
}

}  // namespace duet::synthetic
