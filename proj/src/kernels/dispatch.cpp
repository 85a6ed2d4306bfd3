#include <cstdlib>

#include "ksign/kernels.hpp"

namespace ksign::kernels {

#ifndef KSIGN_HAVE_AVX2
namespace avx2 {
double gather_sum(std::span<const double> table, std::span<const std::uint32_t> idx) {
  return scalar::gather_sum(table, idx);
}
double chebyshev_u_sum(int k, std::span<const double> x) { return scalar::chebyshev_u_sum(k, x); }
}  // namespace avx2
#endif

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(KSIGN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool cpu = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return cpu;
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* force = std::getenv("KSIGN_FORCE_SCALAR");
    if (force != nullptr && *force != '\0' && *force != '0') return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

double gather_sum(std::span<const double> table, std::span<const std::uint32_t> idx, Isa isa) {
  if (isa == Isa::avx2 && isa_available(Isa::avx2)) return avx2::gather_sum(table, idx);
  return scalar::gather_sum(table, idx);
}

double gather_sum(std::span<const double> table, std::span<const std::uint32_t> idx) {
  return gather_sum(table, idx, active_isa());
}

double chebyshev_u_sum(int k, std::span<const double> x, Isa isa) {
  if (isa == Isa::avx2 && isa_available(Isa::avx2)) return avx2::chebyshev_u_sum(k, x);
  return scalar::chebyshev_u_sum(k, x);
}

double chebyshev_u_sum(int k, std::span<const double> x) { return chebyshev_u_sum(k, x, active_isa()); }

}  // namespace ksign::kernels
