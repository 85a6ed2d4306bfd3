#include "ksign/measures.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include "ksign/error.hpp"

namespace ksign {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kFourOverPi = 4.0 / std::numbers::pi;

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// Three-point end slope with the usual shape-preserving limits.
double pchip_end_slope(double d0, double d1) {
  double s = (3.0 * d0 - d1) / 2.0;
  if (sign(s) != sign(d0)) return 0.0;
  if (sign(d0) != sign(d1) && std::fabs(s) > 3.0 * std::fabs(d0)) return 3.0 * d0;
  return s;
}

}  // namespace

double mu1_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(Errc::domain_error, "mu1_interval: x outside [0, 1]");
  if (x == 1.0) return 1.0;
  return (2.0 / std::numbers::pi) * (x * std::sqrt(1.0 - x * x) + std::asin(x));
}

MeasureTable::MeasureTable(int order, std::vector<double> cdf) : order_(order), cdf_(std::move(cdf)) {
  const std::size_t n = cdf_.size();
  if (n < 3) throw Error(Errc::domain_error, "MeasureTable: need at least two cells");
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t g = 0; g + 1 < n; ++g) delta[g] = (cdf_[g + 1] - cdf_[g]) / h;
  slope_.assign(n, 0.0);
  for (std::size_t g = 1; g + 1 < n; ++g) {
    const double a = delta[g - 1];
    const double b = delta[g];
    if (a * b > 0.0) slope_[g] = 2.0 / (1.0 / a + 1.0 / b);
  }
  slope_[0] = pchip_end_slope(delta[0], delta[1]);
  slope_[n - 1] = pchip_end_slope(delta[n - 2], delta[n - 3]);
}

double MeasureTable::operator()(double x) const {
  if (x <= 0.0) return cdf_.front();
  if (x >= 1.0) return cdf_.back();
  const int G = grid_size();
  const double pos = x * G;
  const int g = std::min(static_cast<int>(pos), G - 1);
  const double h = 1.0 / G;
  const double t = pos - g;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * cdf_[g] + h10 * h * slope_[g] + h01 * cdf_[g + 1] + h11 * h * slope_[g + 1];
}

void MeasureTable::write_csv(std::ostream& os) const {
  os << "x,cdf\n";
  os.precision(17);
  for (int g = 0; g <= grid_size(); ++g) os << node(g) << ',' << cdf_[g] << '\n';
}

namespace {

// mu^(j)([-x,x]) = mu1([-x,x]) + (4/pi) int_x^1 mu^(j-1)([-x/t, x/t]) sqrt(1-t^2) dt.
// With u = x/t = x cosh(s) the tail is int_0^{acosh(1/x)} mu^(j-1)(u) tanh^2(s) sech(s) ds:
// no endpoint singularity, and the interpolant is one cubic per table cell, so
// fixed Gauss-Legendre on the cell breakpoints is exact up to the smooth weight.
MeasureTable next_order(const MeasureTable& prev) {
  using boost::math::quadrature::gauss;
  const int G = prev.grid_size();
  std::vector<double> cdf(G + 1);
  cdf[0] = 0.0;
  cdf[G] = 1.0;
  auto node_value = [&](int g) {
    const double x = prev.node(g);
    auto f = [&](double s) {
      const double ch = std::cosh(s);
      const double th = std::tanh(s);
      return prev(std::min(1.0, x * ch)) * th * th / ch;
    };
    double tail = 0.0;
    double lo = 0.0;
    for (int h = g + 1; h <= G; ++h) {
      const double hi = std::acosh(std::max(1.0, prev.node(h) / x));
      tail += gauss<double, 7>::integrate(f, lo, hi);
      lo = hi;
    }
    return std::min(1.0, mu1_interval(x) + kFourOverPi * tail);
  };
  // Nodes are independent; interleave them so the O(G - g) costs balance.
  const int workers = static_cast<int>(std::max(1u, std::min(16u, std::thread::hardware_concurrency())));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int g = 1 + w; g < G; g += workers) cdf[g] = node_value(g);
      });
  }
  // Quadrature noise must not break monotonicity.
  for (int g = 1; g <= G; ++g) cdf[g] = std::max(cdf[g], cdf[g - 1]);
  return MeasureTable(prev.order() + 1, std::move(cdf));
}

MeasureTable first_order(int grid_size) {
  std::vector<double> cdf(grid_size + 1);
  for (int g = 0; g <= grid_size; ++g) cdf[g] = mu1_interval(static_cast<double>(g) / grid_size);
  return MeasureTable(1, std::move(cdf));
}

}  // namespace

std::vector<MeasureTable> build_measure_tables(int max_order, int grid_size) {
  if (max_order < 1) throw Error(Errc::domain_error, "build_measure_tables: order < 1");
  if (grid_size < 256) throw Error(Errc::domain_error, "build_measure_tables: grid_size < 256");
  std::vector<MeasureTable> tables;
  tables.push_back(first_order(grid_size));
  while (static_cast<int>(tables.size()) < max_order) tables.push_back(next_order(tables.back()));
  return tables;
}

MeasureTable build_measure_table(int order, int grid_size) {
  return build_measure_tables(order, grid_size).back();
}

double solve_y(int i, double x, const MeasureTable& table) {
  if (i < 2) throw Error(Errc::domain_error, "solve_y: i < 2");
  if (table.order() != i - 1) throw Error(Errc::domain_error, "solve_y: table order must be i - 1");
  const double target = 1.0 - mu1_interval(x);
  if (target <= 0.0) return 0.0;
  if (target >= 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (table(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double compute_ci(int i, const MeasureTable& table_i_minus_1) {
  if (i < 2) throw Error(Errc::domain_error, "compute_ci: i < 2");
  // x = sin(phi): x dmu1 = (4/pi) sin(phi) cos^2(phi) dphi
  auto f = [&](double phi) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    return s * solve_y(i, std::min(s, 1.0), table_i_minus_1) * kFourOverPi * c * c;
  };
  return gauss_kronrod<double, 31>::integrate(f, 0.0, std::numbers::pi / 2, 15, 1e-12);
}

double compute_ci(int i, int grid_size) {
  if (i < 2 || i > 5) throw Error(Errc::domain_error, "compute_ci: i outside [2, 5]");
  if (grid_size < 2048) throw Error(Errc::domain_error, "compute_ci: grid_size < 2048");
  return compute_ci(i, build_measure_table(i - 1, grid_size));
}

}  // namespace ksign
