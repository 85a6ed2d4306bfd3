#include <cmath>

#include "ksign/exact_sum.hpp"
#include "ksign/kernels.hpp"

namespace ksign::kernels::scalar {

double gather_sum(std::span<const double> table, std::span<const std::uint32_t> idx) {
  CompensatedSum s;
  for (std::uint32_t j : idx) s.add(table[j]);
  return s.value();
}

double chebyshev_u_sum(int k, std::span<const double> x) {
  CompensatedSum s;
  for (double c : x) {
    const double two_c = 2.0 * c;
    double prev = 1.0;
    double cur = two_c;
    if (k == 0) cur = 1.0;
    for (int n = 1; n < k; ++n) {
      const double next = std::fma(two_c, cur, -prev);
      prev = cur;
      cur = next;
    }
    s.add(cur);
  }
  return s.value();
}

}  // namespace ksign::kernels::scalar
