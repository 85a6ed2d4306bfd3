#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ksign/kernels.hpp"

using namespace ksign;
using kernels::Isa;

namespace {

std::vector<double> random_table(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> t(n);
  for (auto& v : t) v = u(rng);
  return t;
}

}  // namespace

TEST_CASE("gather_sum: every ISA agrees with a long double reference") {
  const auto table = random_table(5003, 1);
  std::mt19937_64 rng(2);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 31u, 1000u, 65537u}) {
    std::vector<std::uint32_t> idx(n);
    for (auto& i : idx) i = static_cast<std::uint32_t>(rng() % table.size());
    long double ref = 0.0L;
    for (auto i : idx) ref += table[i];
    const double s = kernels::scalar::gather_sum(table, idx);
    CHECK(s == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
    if (kernels::isa_available(Isa::avx2)) {
      const double v = kernels::avx2::gather_sum(table, idx);
      CHECK(std::fabs(v - s) <= 1e-12 * std::max(1.0, std::fabs(s)));
    }
    CHECK(std::fabs(kernels::gather_sum(table, idx) - s) <= 1e-12 * std::max(1.0, std::fabs(s)));
  }
}

TEST_CASE("chebyshev_u_sum: recurrence against sin((k+1)t)/sin(t)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.01, std::numbers::pi - 0.01);
  std::vector<double> theta(1001), x(1001);
  for (std::size_t j = 0; j < x.size(); ++j) {
    theta[j] = th(rng);
    x[j] = std::cos(theta[j]);
  }
  for (int k = 0; k <= 12; ++k) {
    long double ref = 0.0L;
    for (double t : theta) ref += std::sin((k + 1) * t) / std::sin(t);
    const double s = kernels::scalar::chebyshev_u_sum(k, x);
    CHECK(s == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
    if (kernels::isa_available(Isa::avx2)) {
      const double v = kernels::avx2::chebyshev_u_sum(k, x);
      CHECK(std::fabs(v - s) <= 1e-11 * std::max(1.0, std::fabs(s)));
    }
  }
}

TEST_CASE("chebyshev_u_sum at the endpoints") {
  const std::vector<double> ends{1.0, -1.0, 1.0};
  for (int k = 0; k <= 10; ++k) {
    const double expected = (k + 1) * (2.0 + (k % 2 == 0 ? 1.0 : -1.0));
    CHECK(kernels::chebyshev_u_sum(k, ends) == doctest::Approx(expected));
    CHECK(kernels::chebyshev_u_sum(k, ends, Isa::scalar) == doctest::Approx(expected));
  }
}

TEST_CASE("dispatch reports a usable ISA") {
  const Isa isa = kernels::active_isa();
  CHECK(kernels::isa_available(isa));
  CHECK(kernels::isa_available(Isa::scalar));
  MESSAGE("active ISA: " << kernels::isa_name(isa));
}
