#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "ksign/error.hpp"
#include "ksign/exp_sums.hpp"

namespace ksign {

namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

// S(a, n; c) = sum_x f(x) e(a x / c) with f(x) = e(n x^-1 / c) on units, so the
// whole row over a is the backward DFT of f.
std::vector<double> kloosterman_sweep(i64 n, u64 c) {
  if (c == 0) throw Error(Errc::domain_error, "kloosterman_sweep: c = 0");
  if (c == 1) return {1.0};
  if (c > (1ULL << 28)) throw Error(Errc::range_too_large, "kloosterman_sweep: modulus too large for a dense DFT");
  const u64 nr = reduce(n, c);
  const auto size = static_cast<std::size_t>(c);
  fftw_complex* buf = fftw_alloc_complex(size);
  for (std::size_t x = 0; x < size; ++x) buf[x][0] = buf[x][1] = 0.0;
  for (u64 x = 1; x < c; ++x) {
    const auto inv = inverse_mod(x, c);
    if (!inv) continue;
    const u64 ph = mulmod(nr, *inv, c);
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(ph) / static_cast<double>(c));
    buf[x][0] = std::cos(angle);
    buf[x][1] = std::sin(angle);
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(size), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<double> out(size);
  for (std::size_t a = 0; a < size; ++a) out[a] = buf[a][0];
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

}  // namespace ksign
