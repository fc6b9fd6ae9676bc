#include "duet/ctrnn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace duet {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

NeuronVector input_currents(const CtrnnParams& params, const SensorInputs& intensities) {
  NeuronVector current{};
  const std::size_t motors = params.n < kMotorNeurons ? params.n : kMotorNeurons;
  for (std::size_t i = 0; i < motors; ++i) {
    current[i] = params.input_gains[i][0] * intensities[0] + params.input_gains[i][1] * intensities[1];
  }
  return current;
}

namespace {

NeuronVector derivative_with_current(const CtrnnParams& params, const NeuronVector& s, const NeuronVector& current) {
  NeuronVector rate{};
  for (std::size_t j = 0; j < params.n; ++j) {
    rate[j] = logistic(s[j] + params.biases[j]);
  }
  NeuronVector ds{};
  for (std::size_t i = 0; i < params.n; ++i) {
    double input = -s[i];
    for (std::size_t j = 0; j < params.n; ++j) {
      input += params.weights[j][i] * rate[j];
    }
    ds[i] = (input + current[i]) / params.taus[i];
  }
  return ds;
}

NeuronVector axpy(const NeuronVector& s, const NeuronVector& k, double h) {
  NeuronVector out = s;
  for (std::size_t i = 0; i < kMaxNeurons; ++i) out[i] += h * k[i];
  return out;
}

}  // namespace

NeuronVector derivative(const CtrnnParams& params, const CtrnnState& state, const SensorInputs& intensities) {
  return derivative_with_current(params, state.s, input_currents(params, intensities));
}

CtrnnState step_rk4(const CtrnnParams& params, const CtrnnState& state, const SensorInputs& intensities,
                    double dt) {
  const NeuronVector current = input_currents(params, intensities);
  const NeuronVector& s = state.s;
  const NeuronVector k1 = derivative_with_current(params, s, current);
  const NeuronVector k2 = derivative_with_current(params, axpy(s, k1, 0.5 * dt), current);
  const NeuronVector k3 = derivative_with_current(params, axpy(s, k2, 0.5 * dt), current);
  const NeuronVector k4 = derivative_with_current(params, axpy(s, k3, dt), current);
  CtrnnState next = state;
  for (std::size_t i = 0; i < params.n; ++i) {
    next.s[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return next;
}

double motor_velocity(double sigma, double gain) { return gain * (2.0 * sigma - 1.0); }

MotorOutputs motor_outputs(const CtrnnParams& params, const CtrnnState& state) {
  const double sigma1 = logistic(state.s[0] + params.biases[0]);
  const double sigma2 =
      params.pruned_output_2 ? *params.pruned_output_2 : logistic(state.s[1] + params.biases[1]);
  return {motor_velocity(sigma1, params.output_gains[0]), motor_velocity(sigma2, params.output_gains[1])};
}

CtrnnParams prune_neuron(const CtrnnParams& params, std::size_t index) {
  if (index != 2 && index != 3) {
    throw std::invalid_argument("only neuron 3 or neuron 2 can be pruned");
  }
  if (index == 2 && params.n > 2) {
    throw std::invalid_argument("neuron 3 must be pruned before neuron 2");
  }
  const std::size_t k = index - 1;
  CtrnnParams pruned = params;
  for (std::size_t other = 0; other < kMaxNeurons; ++other) {
    pruned.weights[k][other] = 0.0;
    pruned.weights[other][k] = 0.0;
  }
  if (index == 2) {
    pruned.input_gains[1] = {0.0, 0.0};
    pruned.pruned_output_2 = logistic(params.biases[1]);
  }
  pruned.n = std::min(pruned.n, k);
  return pruned;
}

bool params_in_range(const CtrnnParams& params) {
  if (params.n < 1 || params.n > kMaxNeurons) return false;
  for (std::size_t i = 0; i < params.n; ++i) {
    if (!(params.taus[i] >= kTauMin && params.taus[i] <= kTauMax)) return false;
    if (!(std::abs(params.biases[i]) <= kBiasBound)) return false;
    for (std::size_t j = 0; j < kMaxNeurons; ++j) {
      if (!(std::abs(params.weights[j][i]) <= kWeightBound)) return false;
    }
  }
  for (std::size_t j = params.n; j < kMaxNeurons; ++j) {
    for (std::size_t i = 0; i < kMaxNeurons; ++i) {
      if (params.weights[j][i] != 0.0 || params.weights[i][j] != 0.0) return false;
    }
  }
  for (std::size_t i = 0; i < kMotorNeurons; ++i) {
    if (!(std::abs(params.output_gains[i]) <= kOutputGainBound)) return false;
    for (double g : params.input_gains[i]) {
      if (!(std::abs(g) <= kInputGainBound)) return false;
      if (i >= params.n && g != 0.0) return false;
    }
  }
  return true;
}

}  // namespace duet
