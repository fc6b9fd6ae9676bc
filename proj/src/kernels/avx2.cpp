// Compiled with -mavx2 only; callers must check isa_supported(Isa::avx2).
#include <immintrin.h>

#include "duet/kernels.hpp"
#include "tail.hpp"

namespace duet::kernels::avx2 {

void lagged_sq_distances(const double* series, std::size_t dim, std::size_t delay, std::size_t query,
                         std::size_t count, double* out) {
  std::size_t j = 0;
  for (; j + 8 <= count; j += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const double* row = series + j + k * delay;
      const __m256d q = _mm256_broadcast_sd(series + query + k * delay);
      const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(row), q);
      const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(row + 4), q);
      acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
      acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
    }
    _mm256_storeu_pd(out + j, acc0);
    _mm256_storeu_pd(out + j + 4, acc1);
  }
  for (; j + 4 <= count; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d q = _mm256_broadcast_sd(series + query + k * delay);
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(series + j + k * delay), q);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    _mm256_storeu_pd(out + j, acc);
  }
  detail::lagged_sq_distances_range(series, dim, delay, query, j, count, out);
}

}  // namespace duet::kernels::avx2
