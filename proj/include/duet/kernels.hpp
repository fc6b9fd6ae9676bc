#pragma once

// Distance kernels for delay-embedded series.
//
// A delay embedding never needs to be materialized: coordinate k of point j
// is series[j + k * delay], so coordinate k of points j..j+3 is contiguous in
// memory. The SIMD variants vectorize across neighbouring points and sum the
// coordinates in the same order as the scalar reference without fused
// multiply-add, so every variant produces bitwise-identical results.

#include <cstddef>
#include <span>

namespace duet::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

// The variant used by the dispatching entry points. Defaults to the widest
// supported ISA; the DUET_ISA environment variable (scalar|avx2|neon) or
// set_isa() override it.
Isa active_isa();
// Throws std::invalid_argument when the ISA is not available on this CPU.
void set_isa(Isa isa);

// out[j] = sum_{k < dim} (series[j + k*delay] - series[query + k*delay])^2
// for j in [0, out.size()). Every index touched must lie inside `series`.
void lagged_sq_distances(std::span<const double> series, std::size_t dim, std::size_t delay, std::size_t query,
                         std::span<double> out);

namespace scalar {
void lagged_sq_distances(const double* series, std::size_t dim, std::size_t delay, std::size_t query,
                         std::size_t count, double* out);
}
namespace avx2 {
void lagged_sq_distances(const double* series, std::size_t dim, std::size_t delay, std::size_t query,
                         std::size_t count, double* out);
}
namespace neon {
void lagged_sq_distances(const double* series, std::size_t dim, std::size_t delay, std::size_t query,
                         std::size_t count, double* out);
}

}  // namespace duet::kernels
