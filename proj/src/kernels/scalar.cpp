#include "duet/kernels.hpp"
#include "tail.hpp"

namespace duet::kernels::scalar {

void lagged_sq_distances(const double* series, std::size_t dim, std::size_t delay, std::size_t query,
                         std::size_t count, double* out) {
  detail::lagged_sq_distances_range(series, dim, delay, query, 0, count, out);
}

}  // namespace duet::kernels::scalar
