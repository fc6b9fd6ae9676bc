#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "duet/kernels.hpp"

namespace duet::kernels {

#if !defined(DUET_KERNEL_AVX2)
namespace avx2 {
void lagged_sq_distances(const double*, std::size_t, std::size_t, std::size_t, std::size_t, double*) {
  throw std::logic_error("AVX2 kernels not compiled in");
}
}  // namespace avx2
#endif

#if !defined(DUET_KERNEL_NEON)
namespace neon {
void lagged_sq_distances(const double*, std::size_t, std::size_t, std::size_t, std::size_t, double*) {
  throw std::logic_error("NEON kernels not compiled in");
}
}  // namespace neon
#endif

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(DUET_KERNEL_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(DUET_KERNEL_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa detect() {
  if (const char* forced = std::getenv("DUET_ISA")) {
    const std::string name(forced);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == isa_name(isa) && isa_supported(isa)) return isa;
    }
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument(std::string("ISA not supported here: ") + isa_name(isa));
  current().store(isa, std::memory_order_relaxed);
}

void lagged_sq_distances(std::span<const double> series, std::size_t dim, std::size_t delay, std::size_t query,
                         std::span<double> out) {
  const std::size_t count = out.size();
  if (dim == 0 || count == 0) {
    for (double& d : out) d = 0.0;
    return;
  }
  const std::size_t span_needed = (dim - 1) * delay;
  if (query + span_needed >= series.size() || count - 1 + span_needed >= series.size()) {
    throw std::out_of_range("lagged_sq_distances: embedding reaches past the series");
  }
  switch (active_isa()) {
    case Isa::avx2: avx2::lagged_sq_distances(series.data(), dim, delay, query, count, out.data()); return;
    case Isa::neon: neon::lagged_sq_distances(series.data(), dim, delay, query, count, out.data()); return;
    case Isa::scalar: break;
  }
  scalar::lagged_sq_distances(series.data(), dim, delay, query, count, out.data());
}

}  // namespace duet::kernels
