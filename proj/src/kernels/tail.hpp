#pragma once

#include <cstddef>

namespace duet::kernels::detail {

// Scalar reference for points j in [begin, count); shared by every variant.
inline void lagged_sq_distances_range(const double* series, std::size_t dim, std::size_t delay, std::size_t query,
                                      std::size_t begin, std::size_t count, double* out) {
  for (std::size_t j = begin; j < count; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = series[j + k * delay] - series[query + k * delay];
      acc += diff * diff;
    }
    out[j] = acc;
  }
}

}  // namespace duet::kernels::detail
