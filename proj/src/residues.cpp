#include "ksign/residues.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ksign/error.hpp"

namespace ksign {

using cplx = std::complex<double>;

double ResidueCheck::error() const {
  const double diff = std::fabs(numeric - closed_form);
  return closed_form == 0.0 ? diff : diff / std::fabs(closed_form);
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

double rising(int base, int m) {
  double r = 1.0;
  for (int j = 0; j < m; ++j) r *= base + j;
  return r;
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int j = 0; j < n; ++j) r *= z;
  return r;
}

}  // namespace

ResidueCheck residue_lemma6_check(double x, int k, double tol) {
  if (!(x > 0.0) || x == 1.0) throw Error(Errc::domain_error, "residue_lemma6_check: need x > 0, x != 1");
  if (k < 0) throw Error(Errc::domain_error, "residue_lemma6_check: k < 0");
  const double a = std::log(x);
  const double abs_a = std::fabs(a);
  const double scale = factorial(k) * x / std::numbers::pi;
  constexpr int M = 8;

  // Smallest T with scale * (k+1)_M / (|a|^M (k+M) T^{k+M}) <= tol, and
  // |a| T well past the point where the asymptotic series turns around.
  const double bound_T = std::pow(scale * rising(k + 1, M) / (std::pow(abs_a, M) * (k + M) * tol), 1.0 / (k + M));
  const double T = std::max({bound_T, 50.0 * (k + M) / abs_a, 10.0});
  if (!(T <= 1e7)) throw Error(Errc::slow_decay, "residue_lemma6_check: truncation needs T > 1e7 (x too close to 1)");

  // Re int_0^T e^{iat} (1+it)^{-(k+1)} dt on half-period panels.
  auto f = [&](double t) {
    const cplx w = std::pow(cplx(1.0, t), -(k + 1));
    return (cplx(std::cos(a * t), std::sin(a * t)) * w).real();
  };
  const double half_period = std::numbers::pi / abs_a;
  const int panels = static_cast<int>(std::ceil(T / half_period));
  double body = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = p * half_period;
    const double hi = std::min(T, lo + half_period);
    body += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, 10, 1e-13);
  }

  // int_T^inf e^{iat} f(t) dt = -e^{iaT} sum_m (-1)^m f^(m)(T) / (ia)^{m+1},
  // f^(m)(t) = (-i)^m (k+1)_m (1+it)^{-(k+1+m)}.
  const cplx ia(0.0, a);
  const cplx one_it(1.0, T);
  cplx tail = 0.0;
  cplx neg_i_pow = 1.0;
  for (int m = 0; m < M; ++m) {
    const cplx deriv = neg_i_pow * rising(k + 1, m) * std::pow(one_it, -(k + 1 + m));
    tail += (m % 2 == 0 ? 1.0 : -1.0) * deriv / ipow(ia, m + 1);
    neg_i_pow *= cplx(0.0, -1.0);
  }
  tail *= -std::exp(cplx(0.0, a * T));

  ResidueCheck out;
  out.numeric = scale * (body + tail.real());
  out.closed_form = x < 1.0 ? 0.0 : std::pow(a, k);
  return out;
}

ResidueCheck residue_lemma7_check(double x, int k, int l, ContourOptions opts) {
  if (!(x >= 1.0)) throw Error(Errc::domain_error, "residue_lemma7_check: x < 1");
  if (k < 0 || l < 0) throw Error(Errc::domain_error, "residue_lemma7_check: negative order");
  if (opts.nodes < 2048) throw Error(Errc::domain_error, "residue_lemma7_check: fewer than 2048 nodes");
  const double a = std::log(x);
  const int total = 2 * k + l;
  double r = opts.radius;
  if (r <= 0.0) r = a > 0.0 ? std::max(0.1, (total + 1) / (3.0 * a)) : 0.1;
  if (r <= 0.0) throw Error(Errc::domain_error, "residue_lemma7_check: radius must be positive");

  const int N = opts.nodes;
  // (1/2 pi i) oint g ds = (1/N) sum g(s) s on a circle: fold the separable
  // factors x^s s^{-(k+1)} s into per-node weights.
  std::vector<cplx> s1(N), s2(N), w1(N), w2(N);
  for (int j = 0; j < N; ++j) {
    const double th = 2.0 * std::numbers::pi * j / N;
    s1[j] = std::polar(r, th);
    s2[j] = std::polar(2.0 * r, th);
    w1[j] = std::exp(a * s1[j]) * std::pow(s1[j], -k);
    w2[j] = std::exp(a * s2[j]) * std::pow(s2[j], -k);
  }
  cplx acc = 0.0;
  for (int i = 0; i < N; ++i) {
    cplx row = 0.0;
    for (int j = 0; j < N; ++j) row += w2[j] * ipow(1.0 / (s1[i] + s2[j]), l);
    acc += w1[i] * row;
  }
  const double J = acc.real() / (static_cast<double>(N) * N);

  double binom = 1.0;
  for (int j = 1; j <= k; ++j) binom = binom * (k + j) / j;
  ResidueCheck out;
  out.numeric = J;
  out.closed_form = binom * std::pow(a, total) / factorial(total);
  return out;
}

}  // namespace ksign
