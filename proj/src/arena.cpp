#include "duet/arena.hpp"

#include <algorithm>
#include <utility>

namespace duet {

Vec2 Body::sensor_position(std::size_t k) const {
  const double angle = k == 0 ? heading - kSensorOffset : heading + kSensorOffset;
  return position + unit(angle) * radius;
}

Vec2 com_velocity(const Body& body, double v1, double v2) { return unit(body.heading) * (0.5 * (v1 + v2)); }

Body update_pose(const Body& body, double v1, double v2, double dt) {
  Body next = body;
  next.position += com_velocity(body, v1, v2) * dt;
  next.heading += (v1 - v2) / (2.0 * body.radius) * dt;
  return next;
}

namespace {

// Moves both bodies apart symmetrically so their centres are exactly `contact` apart.
bool separate(std::array<Body, 2>& bodies, double contact) {
  Vec2 axis = bodies[1].position - bodies[0].position;
  const double gap = norm(axis);
  bool degenerate = false;
  if (gap < 1e-12) {
    axis = {1.0, 0.0};
    degenerate = true;
  } else {
    axis = axis * (1.0 / gap);
  }
  const Vec2 centre = (bodies[0].position + bodies[1].position) * 0.5;
  bodies[0].position = centre - axis * (0.5 * contact);
  bodies[1].position = centre + axis * (0.5 * contact);
  return degenerate;
}

// Earliest t in [0, dt] at which |dp + dv t| = contact, given that the bodies
// overlap at t = dt. Returns 0 if they already touch at the start.
double contact_time(Vec2 dp, Vec2 dv, double contact, double dt) {
  const double a = dot(dv, dv);
  const double b = 2.0 * dot(dp, dv);
  const double c = dot(dp, dp) - contact * contact;
  if (c <= 0.0 || a == 0.0) return 0.0;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0.0;
  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  return std::clamp(t, 0.0, dt);
}

}  // namespace

CollisionResolution resolve_collision(const WorldState& state) {
  CollisionResolution out{state, false};
  std::swap(out.state.com_velocities[0], out.state.com_velocities[1]);
  const double contact = state.bodies[0].radius + state.bodies[1].radius;
  out.degenerate = separate(out.state.bodies, contact);
  return out;
}

double shadow_distance(Vec2 source, Vec2 sensor, const Body& listener) {
  const double d_sen = distance(source, sensor);
  if (d_sen < 1e-12) return 0.0;
  const double d = distance(source, listener.position);
  const double r = listener.radius;
  const double a = std::clamp((d * d - r * r) / (d_sen * d_sen), 0.0, 1.0);
  if (a >= 1.0) return 0.0;
  return std::clamp(d_sen * (1.0 - a), 0.0, 2.0 * r);
}

double sensor_intensity(Vec2 source, double emission, Vec2 sensor, const Body& listener) {
  const double d_sen = std::max(distance(source, sensor), kMinSensorDistance);
  const double shadow = shadow_distance(source, sensor, listener);
  const double attenuation = 1.0 - (1.0 - kMaxShadowAttenuation) * shadow / (2.0 * listener.radius);
  return emission / (d_sen * d_sen) * attenuation;
}

SensorInputs sense(const WorldState& state, std::size_t listener) {
  const Body& self = state.bodies[listener];
  const Vec2 source = state.bodies[1 - listener].position;
  return {sensor_intensity(source, state.emission, self.sensor_position(0), self),
          sensor_intensity(source, state.emission, self.sensor_position(1), self)};
}

StepEvents advance_world(WorldState& state, const std::array<MotorOutputs, 2>& motors, double dt) {
  StepEvents events;
  const std::array<Body, 2> start = state.bodies;
  for (std::size_t a = 0; a < 2; ++a) {
    state.com_velocities[a] = com_velocity(start[a], motors[a][0], motors[a][1]);
    state.bodies[a] = update_pose(start[a], motors[a][0], motors[a][1], dt);
  }
  state.time += dt;
  if (!state.collisions_enabled) return events;

  const double contact = start[0].radius + start[1].radius;
  if (distance(state.bodies[0].position, state.bodies[1].position) >= contact) return events;

  events.collided = true;
  const Vec2 dp = start[1].position - start[0].position;
  const Vec2 dv = state.com_velocities[1] - state.com_velocities[0];
  const double t_hit = contact_time(dp, dv, contact, dt);
  std::swap(state.com_velocities[0], state.com_velocities[1]);
  for (std::size_t a = 0; a < 2; ++a) {
    // Pre-swap velocity until contact, post-swap velocity afterwards. The
    // swapped-in velocity belonged to the other body before the swap.
    const Vec2 before = state.com_velocities[1 - a];
    state.bodies[a].position = start[a].position + before * t_hit + state.com_velocities[a] * (dt - t_hit);
  }
  if (distance(state.bodies[0].position, state.bodies[1].position) < contact) {
    events.degenerate = separate(state.bodies, contact);
  }
  return events;
}

}  // namespace duet
