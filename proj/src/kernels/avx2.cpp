#include <immintrin.h>

#include <array>

#include "ksign/exact_sum.hpp"
#include "ksign/kernels.hpp"

namespace ksign::kernels::avx2 {

namespace {

// Four-lane Neumaier step: sum += v with per-lane error compensation.
inline void neumaier4(__m256d& sum, __m256d& comp, __m256d v) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d t = _mm256_add_pd(sum, v);
  const __m256d sum_big = _mm256_cmp_pd(_mm256_and_pd(sum, abs_mask), _mm256_and_pd(v, abs_mask), _CMP_GE_OQ);
  const __m256d c_sum = _mm256_add_pd(_mm256_sub_pd(sum, t), v);
  const __m256d c_v = _mm256_add_pd(_mm256_sub_pd(v, t), sum);
  comp = _mm256_add_pd(comp, _mm256_blendv_pd(c_v, c_sum, sum_big));
  sum = t;
}

inline CompensatedSum fold(__m256d sum, __m256d comp) {
  alignas(32) std::array<double, 4> s{};
  alignas(32) std::array<double, 4> c{};
  _mm256_store_pd(s.data(), sum);
  _mm256_store_pd(c.data(), comp);
  CompensatedSum out;
  for (int l = 0; l < 4; ++l) out.add(s[l]);
  for (int l = 0; l < 4; ++l) out.add(c[l]);
  return out;
}

}  // namespace

double gather_sum(std::span<const double> table, std::span<const std::uint32_t> idx) {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  const std::size_t n = idx.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx.data() + j));
    const __m256d v = _mm256_i32gather_pd(table.data(), vi, 8);
    neumaier4(sum, comp, v);
  }
  CompensatedSum out = fold(sum, comp);
  for (; j < n; ++j) out.add(table[idx[j]]);
  return out.value();
}

double chebyshev_u_sum(int k, std::span<const double> x) {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  const std::size_t n = x.size();
  std::size_t j = 0;
  const __m256d one = _mm256_set1_pd(1.0);
  for (; j + 4 <= n; j += 4) {
    const __m256d c = _mm256_loadu_pd(x.data() + j);
    const __m256d two_c = _mm256_add_pd(c, c);
    __m256d prev = one;
    __m256d cur = k == 0 ? one : two_c;
    for (int m = 1; m < k; ++m) {
      const __m256d next = _mm256_fmsub_pd(two_c, cur, prev);
      prev = cur;
      cur = next;
    }
    neumaier4(sum, comp, cur);
  }
  CompensatedSum out = fold(sum, comp);
  if (j < n) out.add(scalar::chebyshev_u_sum(k, x.subspan(j)));
  return out.value();
}

}  // namespace ksign::kernels::avx2
