#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference in
// ksign::kernels::scalar and, where the build supports it, an AVX2 variant in
// ksign::kernels::avx2. The unqualified entry points dispatch at runtime.
namespace ksign::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when the variant was compiled in and the CPU supports it.
bool isa_available(Isa isa);

/// Best available ISA, unless KSIGN_FORCE_SCALAR is set in the environment.
Isa active_isa();

/// Compensated sum of table[idx[j]] over all j.
double gather_sum(std::span<const double> table, std::span<const std::uint32_t> idx);
double gather_sum(std::span<const double> table, std::span<const std::uint32_t> idx, Isa isa);

/// Compensated sum of U_k(x[j]), the Chebyshev polynomial of the second kind.
double chebyshev_u_sum(int k, std::span<const double> x);
double chebyshev_u_sum(int k, std::span<const double> x, Isa isa);

namespace scalar {
double gather_sum(std::span<const double> table, std::span<const std::uint32_t> idx);
double chebyshev_u_sum(int k, std::span<const double> x);
}  // namespace scalar

namespace avx2 {
double gather_sum(std::span<const double> table, std::span<const std::uint32_t> idx);
double chebyshev_u_sum(int k, std::span<const double> x);
}  // namespace avx2

}  // namespace ksign::kernels
