#pragma once

// Embodiment and environment of two circular agents in an unbounded plane.
//
// Motor 1 sits on the right side of the body (heading - pi/2) and motor 2 on
// the left (heading + pi/2). Sensor 1 is front-right (heading - pi/4), sensor 2
// front-left (heading + pi/4). Positive motor output drives that side forward.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "duet/ctrnn.hpp"

namespace duet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline constexpr double kBodyRadius = 4.0;
inline constexpr double kSensorOffset = std::numbers::pi / 4.0;
inline constexpr double kMotorOffset = std::numbers::pi / 2.0;
// Below this sensor-source distance the inverse-square law is clamped.
inline constexpr double kMinSensorDistance = 0.1;
// Attenuation factor reached when the signal crosses a full body diameter.
inline constexpr double kMaxShadowAttenuation = 0.1;
inline constexpr double kDefaultEmission = 100.0;
inline constexpr double kContactTolerance = 1e-9;

struct Pose {
  Vec2 position;
  double heading = 0.0;

  bool operator==(const Pose&) const = default;
};

struct Body {
  Vec2 position;
  double heading = 0.0;
  double radius = kBodyRadius;

  Pose pose() const { return {position, heading}; }
  // World position of sensor 0 (front-right) or 1 (front-left), on the circumference.
  Vec2 sensor_position(std::size_t k) const;

  bool operator==(const Body&) const = default;
};

struct WorldState {
  std::array<Body, 2> bodies;
  std::array<Vec2, 2> com_velocities;
  double emission = kDefaultEmission;
  bool collisions_enabled = true;
  double time = 0.0;
};

// Differential-drive kinematics without inertia: translate along the old
// heading at (v1+v2)/2, then turn by (v1-v2)/(2R) * dt.
Body update_pose(const Body& body, double v1, double v2, double dt);

// Centre-of-mass velocity implied by the motor velocities.
Vec2 com_velocity(const Body& body, double v1, double v2);

struct CollisionResolution {
  WorldState state;
  bool degenerate = false;  // coincident centres; pushed apart along +x
};

// Exchanges the centre-of-mass velocities and pushes the bodies apart
// symmetrically along the centre line to exact contact. Headings and angular
// velocities are left alone.
CollisionResolution resolve_collision(const WorldState& state);

// Length of the straight sound path from `source` to `sensor` that lies inside
// the listener's body. Zero when the line of sight is clear; 2R at most.
double shadow_distance(Vec2 source, Vec2 sensor, const Body& listener);

// Inverse-square intensity at the sensor, attenuated linearly from 1 (no
// shadow) to 0.1 (a full diameter of shadow).
double sensor_intensity(Vec2 source, double emission, Vec2 sensor, const Body& listener);

// Intensities at both sensors of `listener` from the other agent's emitter.
SensorInputs sense(const WorldState& state, std::size_t listener);

struct StepEvents {
  bool collided = false;
  bool degenerate = false;
};

// Moves both bodies one step given their motor velocities. With collisions
// enabled, an overlap detected in this step is resolved by advancing to the
// contact time, swapping the centre-of-mass velocities for the rest of the
// step, and projecting any residual overlap to exact contact.
StepEvents advance_world(WorldState& state, const std::array<MotorOutputs, 2>& motors, double dt);

}  // namespace duet
