#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "duet/ctrnn.hpp"

using namespace duet;

namespace {

CtrnnParams single(double w, double bias, double tau) {
  CtrnnParams p;
  p.n = 1;
  p.weights[0][0] = w;
  p.biases[0] = bias;
  p.taus[0] = tau;
  return p;
}

// Independent oracle for one neuron with a direct input current.
double one_neuron_rate(double s, double w, double bias, double tau, double current) {
  return (-s + w / (1.0 + std::exp(-(s + bias))) + current) / tau;
}

double rk4_reference(double s, double w, double bias, double tau, double current, double h) {
  const double k1 = one_neuron_rate(s, w, bias, tau, current);
  const double k2 = one_neuron_rate(s + 0.5 * h * k1, w, bias, tau, current);
  const double k3 = one_neuron_rate(s + 0.5 * h * k2, w, bias, tau, current);
  const double k4 = one_neuron_rate(s + h * k3, w, bias, tau, current);
  return s + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace

TEST_CASE("logistic values") {
  CHECK(logistic(0.0) == 0.5);
  CHECK(logistic(1.7) == doctest::Approx(1.0 - logistic(-1.7)).epsilon(1e-15));
  CHECK(logistic(-2.0) == doctest::Approx(0.119203).epsilon(1e-6));
  CHECK(logistic(-800.0) >= 0.0);
  CHECK(logistic(800.0) <= 1.0);
}

TEST_CASE("derivative examples") {
  CtrnnParams rest;
  rest.n = 3;
  const auto zero = derivative(rest, CtrnnState{}, {0.0, 0.0});
  for (double d : zero) CHECK(d == 0.0);

  // Fixed point s* = I when w = 0; the current comes through an input gain of 1.
  CtrnnParams p = single(0.0, 0.0, 2.0);
  p.input_gains[0] = {1.0, 0.0};
  CHECK(derivative(p, CtrnnState{{0.5, 0.0, 0.0}}, {0.5, 0.0})[0] == doctest::Approx(0.0));

  const CtrnnParams q = single(8.0, -3.0, 1.0);
  CHECK(derivative(q, CtrnnState{{1.0, 0.0, 0.0}}, {0.0, 0.0})[0] == doctest::Approx(-0.046376).epsilon(1e-5));
}

TEST_CASE("input currents reach only the motor neurons") {
  CtrnnParams p;
  p.input_gains = {SensorInputs{2.0, -1.0}, SensorInputs{0.5, 3.0}};
  const auto c = input_currents(p, {1.5, 2.0});
  CHECK(c[0] == doctest::Approx(2.0 * 1.5 - 1.0 * 2.0));
  CHECK(c[1] == doctest::Approx(0.5 * 1.5 + 3.0 * 2.0));
  CHECK(c[2] == 0.0);
}

TEST_CASE("rk4 on linear decay") {
  const CtrnnParams p = single(0.0, 0.0, 1.0);
  const CtrnnState s0{{1.0, 0.0, 0.0}};
  const CtrnnState one = step_rk4(p, s0, {0, 0}, 0.1);
  CHECK(std::abs(one.s[0] - std::exp(-0.1)) < 1e-7);
  const CtrnnState two = step_rk4(p, step_rk4(p, s0, {0, 0}, 0.05), {0, 0}, 0.05);
  CHECK(std::abs(two.s[0] - one.s[0]) < 1e-6);
}

TEST_CASE("rk4 matches a hand-written reference on a nonlinear neuron") {
  CtrnnParams p = single(5.0, -2.0, 3.0);
  p.input_gains[0] = {0.7, 0.0};
  CtrnnState s{{0.3, 0.0, 0.0}};
  double ref = 0.3;
  for (int i = 0; i < 50; ++i) {
    s = step_rk4(p, s, {1.2, 0.0}, 0.1);
    ref = rk4_reference(ref, 5.0, -2.0, 3.0, 0.7 * 1.2, 0.1);
  }
  CHECK(s.s[0] == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("rk4 fixed point is unchanged") {
  CtrnnParams p = single(0.0, 0.0, 4.0);
  p.input_gains[0] = {1.0, 0.0};
  const CtrnnState s{{0.8, 0.0, 0.0}};
  CHECK(step_rk4(p, s, {0.8, 0.0}, 0.1) == s);
}

TEST_CASE("rk4 global error shows fourth order") {
  const CtrnnParams p = single(0.0, 0.0, 1.0);
  auto error_at = [&](int steps) {
    CtrnnState s{{1.0, 0.0, 0.0}};
    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) s = step_rk4(p, s, {0, 0}, h);
    return std::abs(s.s[0] - std::exp(-1.0));
  };
  const double coarse = error_at(5);
  const double fine = error_at(10);
  CHECK(coarse / fine >= 8.0);
  CHECK(std::log2(coarse / fine) == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("motor velocity") {
  CHECK(motor_velocity(0.5, 1.7) == 0.0);
  CHECK(motor_velocity(1.0, 2.0) == 2.0);
  CHECK(motor_velocity(0.25, -2.0) == 1.0);
}

TEST_CASE("prune neuron 3") {
  CtrnnParams p;
  p.weights = {NeuronVector{1, 2, 3}, NeuronVector{4, 5, 6}, NeuronVector{7, 8, 9}};
  const CtrnnParams pruned = prune_neuron(p, 3);
  CHECK(pruned.n == 2);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(pruned.weights[2][k] == 0.0);
    CHECK(pruned.weights[k][2] == 0.0);
  }
  CHECK(pruned.weights[0][1] == 2.0);
  CHECK(prune_neuron(pruned, 3) == pruned);
  CHECK_THROWS_AS(prune_neuron(p, 2), std::invalid_argument);
  CHECK_THROWS_AS(prune_neuron(p, 1), std::invalid_argument);
}

TEST_CASE("prune neuron 2 fixes motor 2") {
  CtrnnParams p;
  p.n = 2;
  p.biases = {0.4, 0.0, 0.0};
  p.output_gains = {1.0, 1.5};
  p.input_gains[1] = {3.0, -2.0};
  CtrnnParams pruned = prune_neuron(p, 2);
  CHECK(pruned.n == 1);
  CHECK(*pruned.pruned_output_2 == 0.5);
  CHECK(pruned.input_gains[1] == SensorInputs{0.0, 0.0});
  CHECK(motor_outputs(pruned, CtrnnState{{2.0, 9.0, 0.0}})[1] == 0.0);
  CHECK(prune_neuron(pruned, 2) == pruned);

  p.biases[1] = -3.0;
  p.output_gains[1] = 2.0;
  pruned = prune_neuron(p, 2);
  CHECK(motor_outputs(pruned, CtrnnState{})[1] == doctest::Approx(-1.810297).epsilon(1e-6));
}

TEST_CASE("pruning inert neurons leaves trajectories bitwise unchanged") {
  CtrnnParams p;
  p.weights[0] = {1.5, -2.0, 0.0};
  p.weights[1] = {3.0, 0.5, 0.0};
  p.biases = {-1.0, 0.5, 2.0};
  p.taus = {2.0, 5.0, 7.0};
  p.input_gains = {SensorInputs{1.0, -1.0}, SensorInputs{0.3, 2.0}};
  p.output_gains = {1.0, -1.0};
  const CtrnnParams pruned = prune_neuron(p, 3);
  CtrnnState a, b;
  for (int i = 0; i < 200; ++i) {
    const SensorInputs in{std::sin(0.1 * i), std::cos(0.07 * i)};
    a = step_rk4(p, a, in, 0.1);
    b = step_rk4(pruned, b, in, 0.1);
    CHECK(a.s[0] == b.s[0]);
    CHECK(a.s[1] == b.s[1]);
  }
}

TEST_CASE("a one-neuron network under constant input is monotone") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int draw = 0; draw < 100; ++draw) {
    CtrnnParams p = single(8.0 * u(rng), 3.0 * u(rng), 1.0 + 49.0 * (u(rng) + 1.0) / 2.0);
    p.input_gains[0] = {10.0 * u(rng), 10.0 * u(rng)};
    const SensorInputs input{std::abs(u(rng)), std::abs(u(rng))};
    CtrnnState s{{2.0 * u(rng), 0.0, 0.0}};
    int sign = 0;
    bool flipped = false;
    for (int i = 0; i < 3000; ++i) {
      const CtrnnState next = step_rk4(p, s, input, 0.1);
      const double rate = next.s[0] - s.s[0];
      if (std::abs(rate) > 1e-9) {
        const int now = rate > 0 ? 1 : -1;
        if (sign != 0 && now != sign) flipped = true;
        sign = now;
      }
      s = next;
    }
    CHECK_FALSE(flipped);
  }
}

TEST_CASE("zero-input activity stays bounded") {
  CtrnnParams p;
  p.weights[0] = {2.0, -3.0, 1.0};
  p.weights[1] = {-4.0, 1.0, 2.5};
  p.weights[2] = {0.5, 6.0, -1.0};
  p.taus = {1.0, 2.5, 4.0};
  CtrnnState s{{5.0, -1.0, 0.5}};
  const NeuronVector start = s.s;
  for (int i = 0; i < 5000; ++i) {
    s = step_rk4(p, s, {0, 0}, 0.1);
    for (std::size_t k = 0; k < 3; ++k) {
      double sum = 0.0;
      for (std::size_t j = 0; j < 3; ++j) sum += std::abs(p.weights[j][k]);
      CHECK(std::abs(s.s[k]) <= std::max(std::abs(start[k]), sum) + 1e-12);
    }
  }
}
