#pragma once

// Continuous-time recurrent neural network with up to three neurons.
//
// Neurons 1 and 2 receive the two sensor currents and drive the two motors.
// Neuron 3 is an interneuron: no sensor input, no motor. The firing-rate gain
// is fixed at 1 and is not a parameter.

#include <array>
#include <cstddef>
#include <optional>

namespace duet {

inline constexpr std::size_t kMaxNeurons = 3;
inline constexpr std::size_t kMotorNeurons = 2;
inline constexpr std::size_t kSensors = 2;

// Evolved parameter ranges.
inline constexpr double kWeightBound = 8.0;
inline constexpr double kBiasBound = 3.0;
inline constexpr double kInputGainBound = 10.0;
inline constexpr double kOutputGainBound = 2.0;
inline constexpr double kTauMin = 1.0;
inline constexpr double kTauMax = 50.0;

using NeuronVector = std::array<double, kMaxNeurons>;
using SensorInputs = std::array<double, kSensors>;
using MotorOutputs = std::array<double, kMotorNeurons>;

struct CtrnnParams {
  // Number of active neurons: 3, 2 (interneuron pruned) or 1 (neuron 2 pruned too).
  std::size_t n = kMaxNeurons;
  // weights[j][i] is the connection strength from neuron j to neuron i.
  std::array<NeuronVector, kMaxNeurons> weights{};
  NeuronVector biases{};
  NeuronVector taus{1.0, 1.0, 1.0};
  // input_gains[i][k]: sensor k onto motor neuron i.
  std::array<SensorInputs, kMotorNeurons> input_gains{};
  MotorOutputs output_gains{};
  // Set when neuron 2 is pruned: its constant firing rate sigma(theta_2).
  std::optional<double> pruned_output_2;

  bool operator==(const CtrnnParams&) const = default;
};

struct CtrnnState {
  NeuronVector s{};

  bool operator==(const CtrnnState&) const = default;
};

double logistic(double x);

// Sensor currents for each neuron; the interneuron gets none.
NeuronVector input_currents(const CtrnnParams& params, const SensorInputs& intensities);

// ds/dt for every neuron. Inactive neurons have zero derivative.
NeuronVector derivative(const CtrnnParams& params, const CtrnnState& state, const SensorInputs& intensities);

// Classical fourth-order Runge-Kutta step with inputs held over the step.
CtrnnState step_rk4(const CtrnnParams& params, const CtrnnState& state, const SensorInputs& intensities,
                    double dt);

// gain * (2 sigma - 1)
double motor_velocity(double sigma, double gain);

// Tangential velocities of motor 1 (right) and motor 2 (left).
MotorOutputs motor_outputs(const CtrnnParams& params, const CtrnnState& state);

// Removes neuron `index` (1-based, 3 or 2) by zeroing its incoming and outgoing
// weights. Pruning neuron 2 also zeroes its input gains and freezes its motor
// output at sigma(theta_2). Throws std::invalid_argument for other indices or
// when neuron 2 is pruned before neuron 3.
CtrnnParams prune_neuron(const CtrnnParams& params, std::size_t index);

// True when every parameter lies inside the evolved ranges and pruned neurons are inert.
bool params_in_range(const CtrnnParams& params);

}  // namespace duet
