#pragma once

// Reference systems with known dynamics, used to validate the analysis tools.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "duet/tsa.hpp"

namespace duet::synthetic {

// x' = 4 x (1 - x), dt = 1. Largest exponent ln 2.
tsa::TimeSeries logistic_map(std::size_t n, double x0 = 0.1234567, std::size_t discard = 100);

// Henon map (a = 1.4, b = 0.3), x component, dt = 1.
tsa::TimeSeries henon_map(std::size_t n, std::size_t discard = 1000);

// Lorenz system (10, 28, 8/3), x component, RK4 with step dt.
tsa::TimeSeries lorenz_x(std::size_t n, double dt = 0.01, std::size_t discard = 5000);

// sin(2 pi t / period), dt = 1.
tsa::TimeSeries sine(std::size_t n, double samples_per_period);

// Standard normal samples, dt = 1.
tsa::TimeSeries white_noise(std::size_t n, std::uint64_t seed);

// Random permutation of the samples: same distribution, no dynamics.
tsa::TimeSeries shuffled(const tsa::TimeSeries& series, std::uint64_t seed);

}  // namespace duet::synthetic
