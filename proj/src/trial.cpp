#include "duet/trial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace duet {

std::size_t TrialConfig::steps() const {
  if (!(dt > 0.0) || !(duration >= 0.0)) {
    throw std::invalid_argument("trial needs dt > 0 and duration >= 0");
  }
  const double ratio = duration / dt;
  const double whole = std::round(ratio);
  if (std::abs(ratio - whole) > 1e-6 * std::max(1.0, ratio)) {
    throw std::invalid_argument("trial duration must be a whole number of steps");
  }
  return static_cast<std::size_t>(whole);
}

std::array<Pose, 2> sample_initial_conditions(Rng& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr double min_gap = 2.0 * kBodyRadius + 1.0;
  std::array<Pose, 2> poses;
  do {
    poses[0].position = {uniform(rng, -20.0, -5.0), uniform(rng, -20.0, 20.0)};
    poses[0].heading = uniform(rng, 0.0, two_pi);
    poses[1].position = {uniform(rng, 5.0, 20.0), uniform(rng, -20.0, 20.0)};
    poses[1].heading = uniform(rng, 0.0, two_pi);
  } while (distance(poses[0].position, poses[1].position) < min_gap);
  return poses;
}

std::array<Pose, 2> initial_conditions_for_seed(std::uint64_t trial_seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(trial_seed), static_cast<std::uint32_t>(trial_seed >> 32)};
  Rng rng(seq);
  return sample_initial_conditions(rng);
}

namespace {

void check_finite(const CtrnnState& state, std::size_t agent, std::size_t step) {
  for (double s : state.s) {
    if (!std::isfinite(s)) {
      std::ostringstream msg;
      msg << "non-finite neuron state for agent " << agent + 1 << " at step " << step;
      throw NumericError(msg.str());
    }
  }
}

Body body_at(const Pose& pose) { return Body{pose.position, pose.heading, kBodyRadius}; }

}  // namespace

TrialRecord run_trial(const CtrnnParams& params, const TrialConfig& config) {
  const std::size_t steps = config.steps();
  WorldState world;
  world.bodies = {body_at(config.init_poses[0]), body_at(config.init_poses[1])};
  world.emission = config.emission;
  world.collisions_enabled = config.collisions_enabled;

  TrialRecord record;
  record.agent_count = 2;
  record.dt = config.dt;
  record.initial_distance = distance(world.bodies[0].position, world.bodies[1].position);
  if (config.record_stride > 0) record.rows.reserve(steps / config.record_stride + 1);

  std::array<CtrnnState, 2> brain{};
  ScoreAccumulator score(record.initial_distance);

  for (std::size_t step = 0;; ++step) {
    const std::array<SensorInputs, 2> inputs{sense(world, 0), sense(world, 1)};
    if (config.record_stride > 0 && step % config.record_stride == 0) {
      TrialRow row;
      row.step = step;
      row.time = static_cast<double>(step) * config.dt;
      for (std::size_t a = 0; a < 2; ++a) {
        row.agents[a] = {brain[a].s, inputs[a], motor_outputs(params, brain[a]), world.bodies[a].pose()};
      }
      row.distance = distance(world.bodies[0].position, world.bodies[1].position);
      row.collisions = record.collision_events;
      record.rows.push_back(row);
    }
    if (step == steps) break;

    std::array<MotorOutputs, 2> motors;
    for (std::size_t a = 0; a < 2; ++a) {
      brain[a] = step_rk4(params, brain[a], inputs[a], config.dt);
      check_finite(brain[a], a, step + 1);
      motors[a] = motor_outputs(params, brain[a]);
    }
    const StepEvents events = advance_world(world, motors, config.dt);
    if (events.collided) {
      if (!record.first_collision_step) record.first_collision_step = step + 1;
      ++record.collision_events;
    }
    if (events.degenerate) ++record.degenerate_events;
    score.add(distance(world.bodies[0].position, world.bodies[1].position));
  }

  record.raw_score = score.raw();
  record.clamped_score = clamp_score(record.raw_score);
  return record;
}

TrialRecord run_isolated(const CtrnnParams& params, const TrialConfig& config) {
  const std::size_t steps = config.steps();
  Body body = body_at(config.init_poses[0]);
  TrialRecord record;
  record.agent_count = 1;
  record.dt = config.dt;
  if (config.record_stride > 0) record.rows.reserve(steps / config.record_stride + 1);

  const SensorInputs silence{0.0, 0.0};
  CtrnnState brain;
  for (std::size_t step = 0;; ++step) {
    if (config.record_stride > 0 && step % config.record_stride == 0) {
      TrialRow row;
      row.step = step;
      row.time = static_cast<double>(step) * config.dt;
      row.agents[0] = {brain.s, silence, motor_outputs(params, brain), body.pose()};
      record.rows.push_back(row);
    }
    if (step == steps) break;
    brain = step_rk4(params, brain, silence, config.dt);
    check_finite(brain, 0, step + 1);
    const MotorOutputs motors = motor_outputs(params, brain);
    body = update_pose(body, motors[0], motors[1], config.dt);
  }
  return record;
}

double trial_score(std::span<const double> distances, double initial_distance) {
  ScoreAccumulator score(initial_distance);
  for (double d : distances) score.add(d);
  return score.raw();
}

double weighted_fitness(std::span<const double> scores) {
  if (scores.empty()) return 0.0;
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  double weighted = 0.0;
  double weights = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double w = 1.0 / static_cast<double>(i + 1);
    weighted += w * sorted[i];
    weights += w;
  }
  return weighted / weights;
}

Evaluation evaluate_solution(const CtrnnParams& params, std::span<const std::uint64_t> trial_seeds,
                             const TrialConfig& base) {
  Evaluation eval;
  eval.scores.reserve(trial_seeds.size());
  TrialConfig config = base;
  config.record_stride = 0;
  for (std::uint64_t seed : trial_seeds) {
    config.init_poses = initial_conditions_for_seed(seed);
    double score = 0.0;
    try {
      score = run_trial(params, config).clamped_score;
    } catch (const NumericError&) {
      score = 0.0;
    }
    eval.scores.push_back(score);
  }
  eval.fitness = weighted_fitness(eval.scores);
  return eval;
}

}  // namespace duet
