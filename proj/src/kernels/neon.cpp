// AArch64 only; NEON is part of the baseline ISA there.
#include <arm_neon.h>

#include "duet/kernels.hpp"
#include "tail.hpp"

namespace duet::kernels::neon {

void lagged_sq_distances(const double* series, std::size_t dim, std::size_t delay, std::size_t query,
                         std::size_t count, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const double* row = series + j + k * delay;
      const float64x2_t q = vdupq_n_f64(series[query + k * delay]);
      const float64x2_t d0 = vsubq_f64(vld1q_f64(row), q);
      const float64x2_t d1 = vsubq_f64(vld1q_f64(row + 2), q);
      // Separate multiply and add: vfmaq would round differently from the scalar path.
      acc0 = vaddq_f64(acc0, vmulq_f64(d0, d0));
      acc1 = vaddq_f64(acc1, vmulq_f64(d1, d1));
    }
    vst1q_f64(out + j, acc0);
    vst1q_f64(out + j + 2, acc1);
  }
  detail::lagged_sq_distances_range(series, dim, delay, query, j, count, out);
}

}  // namespace duet::kernels::neon
