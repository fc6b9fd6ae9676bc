#pragma once

// One evaluation trial of two identical agents, plus the scoring rules.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "duet/arena.hpp"
#include "duet/ctrnn.hpp"
#include "duet/random.hpp"

namespace duet {

// Raised when a neuron state stops being finite.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialConfig {
  double duration = 300.0;
  double dt = 0.1;
  bool collisions_enabled = true;
  std::array<Pose, 2> init_poses{Pose{{-10.0, 0.0}, 0.0}, Pose{{10.0, 0.0}, 0.0}};
  double emission = kDefaultEmission;
  // Steps between logged rows; 0 disables row logging entirely.
  std::size_t record_stride = 5;

  // duration / dt, rejecting configurations that are not a whole number of steps.
  std::size_t steps() const;
};

struct AgentSample {
  NeuronVector s{};
  SensorInputs inputs{};
  MotorOutputs motors{};
  Pose pose;

  bool operator==(const AgentSample&) const = default;
};

// Snapshot after `step` integration steps: neuron state, the sensor reading
// and motor output at that state, and the poses.
struct TrialRow {
  std::size_t step = 0;
  double time = 0.0;
  std::array<AgentSample, 2> agents{};
  double distance = 0.0;
  std::size_t collisions = 0;  // cumulative

  bool operator==(const TrialRow&) const = default;
};

struct TrialRecord {
  std::size_t agent_count = 2;
  double dt = 0.1;
  std::vector<TrialRow> rows;
  double initial_distance = 0.0;
  double raw_score = 0.0;
  double clamped_score = 0.0;
  std::size_t collision_events = 0;
  std::size_t degenerate_events = 0;
  std::optional<std::size_t> first_collision_step;

  bool operator==(const TrialRecord&) const = default;
};

// Agent 1 uniform on [-20,-5] x [-20,20], agent 2 on [5,20] x [-20,20],
// headings uniform on [0, 2 pi).
std::array<Pose, 2> sample_initial_conditions(Rng& rng);
std::array<Pose, 2> initial_conditions_for_seed(std::uint64_t trial_seed);

// Both agents are clones built from `params`; neuron states start at zero.
// Throws NumericError on a non-finite neuron state.
TrialRecord run_trial(const CtrnnParams& params, const TrialConfig& config);

// One agent alone with its sensors forced to zero. Uses init_poses[0].
TrialRecord run_isolated(const CtrnnParams& params, const TrialConfig& config);

// Running mean of (D_init - D_t) / D_init over the steps of a trial.
class ScoreAccumulator {
 public:
  explicit ScoreAccumulator(double initial_distance) : initial_distance_(initial_distance) {}
  void add(double distance) {
    sum_ += (initial_distance_ - distance) / initial_distance_;
    ++steps_;
  }
  double raw() const { return steps_ == 0 ? 0.0 : sum_ / static_cast<double>(steps_); }

 private:
  double initial_distance_;
  double sum_ = 0.0;
  std::size_t steps_ = 0;
};

// Raw score of a distance series (one entry per step after the start).
double trial_score(std::span<const double> distances, double initial_distance);
inline double clamp_score(double raw) { return raw > 0.0 ? raw : 0.0; }

// Rank-weighted mean: scores sorted ascending, the i-th (1-based) weighted by 1/i.
double weighted_fitness(std::span<const double> scores);

struct Evaluation {
  double fitness = 0.0;
  std::vector<double> scores;  // clamped, in seed order
};

// Evaluates a controller on one trial per seed; `base` supplies everything
// except the initial poses.
Evaluation evaluate_solution(const CtrnnParams& params, std::span<const std::uint64_t> trial_seeds,
                             const TrialConfig& base);

}  // namespace duet
