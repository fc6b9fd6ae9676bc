#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "duet/arena.hpp"

using namespace duet;

namespace {

constexpr double pi = std::numbers::pi;

Body body(double x, double y, double heading) { return Body{{x, y}, heading, kBodyRadius}; }

}  // namespace

TEST_CASE("update_pose examples") {
  Body b = update_pose(body(0, 0, 0), 1.0, 1.0, 1.0);
  CHECK(b.position.x == 1.0);
  CHECK(b.position.y == 0.0);
  CHECK(b.heading == 0.0);

  b = update_pose(body(0, 0, 0), 1.0, -1.0, 1.0);
  CHECK(b.position.x == 0.0);
  CHECK(b.heading == doctest::Approx(0.25));

  b = update_pose(body(0, 0, 0), 1.0, 0.0, 0.1);
  CHECK(b.position.x == doctest::Approx(0.05));
  CHECK(b.heading == doctest::Approx(0.0125));
}

TEST_CASE("update_pose moves along the old heading") {
  const Body b = update_pose(body(0, 0, pi / 2), 2.0, 0.0, 0.5);
  CHECK(b.position.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(b.position.y == doctest::Approx(0.5));
  CHECK(b.heading == doctest::Approx(pi / 2 + 0.125));
}

TEST_CASE("update_pose is reversible for small steps") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Body start = body(u(rng) * 10, u(rng) * 10, u(rng));
    const double v1 = u(rng), v2 = u(rng), dt = 1e-3;
    const Body forward = update_pose(start, v1, v2, dt);
    Body back = forward;
    back.heading = start.heading;  // same heading-update convention: undo translation at the old heading
    back = update_pose(back, -v1, -v2, dt);
    CHECK(std::abs(back.position.x - start.position.x) < 1e-9);
    CHECK(std::abs(back.position.y - start.position.y) < 1e-9);
    CHECK(std::abs(update_pose(forward, -v1, -v2, dt).heading - start.heading) < 1e-9);
  }
}

TEST_CASE("sensors sit on the circumference at +-45 degrees") {
  const Body b = body(3, -2, 0.7);
  for (std::size_t k = 0; k < 2; ++k) CHECK(distance(b.sensor_position(k), b.position) == doctest::Approx(kBodyRadius));
  const Vec2 right = b.sensor_position(0) - b.position;
  CHECK(std::atan2(right.y, right.x) == doctest::Approx(0.7 - pi / 4));
}

TEST_CASE("shadow distance examples") {
  const Body listener = body(0, 0, 0);
  CHECK(shadow_distance({10, 0}, {4, 0}, listener) == 0.0);
  CHECK(shadow_distance({10, 0}, {-4, 0}, listener) == doctest::Approx(8.0));
  CHECK(shadow_distance({10, 0}, {0, 4}, listener) == doctest::Approx(std::sqrt(116.0) * 32.0 / 116.0));
  CHECK(shadow_distance({10, 0}, {0, 4}, listener) == doctest::Approx(2.971).epsilon(1e-3));
  CHECK(shadow_distance({4, 0}, {4, 0}, listener) == 0.0);
}

TEST_CASE("shadow distance stays within [0, 2R]") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> angle(0, 2 * pi), dist(2 * kBodyRadius, 200.0);
  for (int i = 0; i < 20000; ++i) {
    const Body listener = body(0, 0, angle(rng));
    const double a = angle(rng), d = dist(rng);
    const Vec2 source{d * std::cos(a), d * std::sin(a)};
    for (std::size_t k = 0; k < 2; ++k) {
      const double sh = shadow_distance(source, listener.sensor_position(k), listener);
      CHECK(sh >= 0.0);
      CHECK(sh <= 2 * kBodyRadius);
    }
  }
}

TEST_CASE("sensor intensity examples") {
  const Body listener = body(0, 0, 0);
  // Unshadowed, 10 units away.
  CHECK(sensor_intensity({14, 0}, 100.0, {4, 0}, listener) == doctest::Approx(1.0));
  // Fully shadowed: D_sen = 14, attenuation 0.1.
  CHECK(sensor_intensity({10, 0}, 100.0, {-4, 0}, listener) == doctest::Approx(100.0 / 196.0 * 0.1));
  // Sensor on top of the source: clamped distance.
  CHECK(sensor_intensity({4, 0}, 100.0, {4, 0}, listener) == doctest::Approx(10000.0));
}

TEST_CASE("sense") {
  WorldState w;
  w.bodies = {body(0, 0, 0), body(1000, 0, pi)};
  auto in = sense(w, 0);
  CHECK(in[0] < 2e-4);
  CHECK(in[1] < 2e-4);

  w.bodies = {body(0, 0, 0), body(30, 0, 0)};
  in = sense(w, 0);
  CHECK(in[0] == doctest::Approx(in[1]).epsilon(1e-14));

  // Source to the left (+y): sensor 2 (front-left) faces it.
  w.bodies = {body(0, 0, 0), body(0, 30, 0)};
  in = sense(w, 0);
  CHECK(in[1] > in[0]);
}

TEST_CASE("mirror symmetry swaps the sensors") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-30, 30), angle(-pi, pi);
  for (int i = 0; i < 500; ++i) {
    WorldState w;
    w.bodies = {body(u(rng), u(rng), angle(rng)), body(u(rng), u(rng), angle(rng))};
    if (distance(w.bodies[0].position, w.bodies[1].position) < 2 * kBodyRadius) continue;
    WorldState m = w;
    for (Body& b : m.bodies) {
      b.position.y = -b.position.y;
      b.heading = -b.heading;
    }
    for (std::size_t a = 0; a < 2; ++a) {
      const auto in = sense(w, a);
      const auto mirrored = sense(m, a);
      CHECK(mirrored[0] == doctest::Approx(in[1]).epsilon(1e-10));
      CHECK(mirrored[1] == doctest::Approx(in[0]).epsilon(1e-10));
    }
  }
}

TEST_CASE("resolve_collision swaps velocities") {
  WorldState w;
  w.bodies = {body(-3.9, 0, 0), body(3.9, 0, pi)};
  w.com_velocities = {Vec2{1, 0}, Vec2{-1, 0}};
  const auto r = resolve_collision(w);
  CHECK(r.state.com_velocities[0] == Vec2{-1, 0});
  CHECK(r.state.com_velocities[1] == Vec2{1, 0});
  CHECK(distance(r.state.bodies[0].position, r.state.bodies[1].position) == doctest::Approx(8.0));
  CHECK(r.state.bodies[0].heading == 0.0);
  CHECK_FALSE(r.degenerate);

  w.com_velocities = {Vec2{0.3, 0.2}, Vec2{0.3, 0.2}};
  CHECK(resolve_collision(w).state.com_velocities == w.com_velocities);

  w.bodies = {body(1, 1, 0), body(1, 1, 0)};
  const auto d = resolve_collision(w);
  CHECK(d.degenerate);
  CHECK(d.state.bodies[1].position.x - d.state.bodies[0].position.x == doctest::Approx(8.0));
}

TEST_CASE("randomized collisions conserve summed velocity and leave no overlap") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1, 1), angle(-pi, pi), gain(-2, 2);
  int collisions = 0;
  for (int i = 0; i < 20000 && collisions < 10000; ++i) {
    WorldState w;
    const double a = angle(rng);
    const double gap = 8.0 + 0.3 * std::abs(u(rng));
    w.bodies = {body(0, 0, angle(rng)), body(gap * std::cos(a), gap * std::sin(a), angle(rng))};
    const std::array<MotorOutputs, 2> motors{MotorOutputs{gain(rng), gain(rng)}, MotorOutputs{gain(rng), gain(rng)}};
    const WorldState before = w;
    const auto events = advance_world(w, motors, 0.1);
    CHECK(distance(w.bodies[0].position, w.bodies[1].position) >= 2 * kBodyRadius - kContactTolerance);
    if (!events.collided) continue;
    ++collisions;
    const Vec2 v0 = com_velocity(before.bodies[0], motors[0][0], motors[0][1]);
    const Vec2 v1 = com_velocity(before.bodies[1], motors[1][0], motors[1][1]);
    const Vec2 sum_before = v0 + v1;
    const Vec2 sum_after = w.com_velocities[0] + w.com_velocities[1];
    CHECK(sum_after.x == sum_before.x);
    CHECK(sum_after.y == sum_before.y);
  }
  CHECK(collisions > 1000);
}

TEST_CASE("ghost condition lets bodies pass through") {
  WorldState w;
  w.collisions_enabled = false;
  w.bodies = {body(-5, 0, 0), body(5, 0, pi)};
  bool overlapped = false;
  for (int i = 0; i < 100; ++i) {
    const auto events = advance_world(w, {MotorOutputs{1, 1}, MotorOutputs{1, 1}}, 0.1);
    CHECK_FALSE(events.collided);
    overlapped = overlapped || distance(w.bodies[0].position, w.bodies[1].position) < 8.0;
  }
  CHECK(overlapped);
}
