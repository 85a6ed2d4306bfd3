#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

namespace ksign {

/// mu^(1)([-x, x]) = (2/pi)(x sqrt(1 - x^2) + arcsin x) for x in [0, 1].
double mu1_interval(double x);

/// Tabulated x -> mu^(j)([-x, x]) on a uniform grid of [0, 1], read back
/// through a monotone piecewise-cubic (Fritsch-Carlson / PCHIP) interpolant.
class MeasureTable {
 public:
  MeasureTable(int order, std::vector<double> cdf);

  int order() const { return order_; }
  int grid_size() const { return static_cast<int>(cdf_.size()) - 1; }
  const std::vector<double>& cdf() const { return cdf_; }
  double node(int g) const { return static_cast<double>(g) / grid_size(); }
  static constexpr std::string_view interpolation() { return "pchip"; }

  double operator()(double x) const;

  /// Columns: x, cdf. One row per node, LF-terminated.
  void write_csv(std::ostream& os) const;

 private:
  int order_;
  std::vector<double> cdf_;
  std::vector<double> slope_;
};

/// mu^(j) for a single order, built up from the closed form of mu^(1).
MeasureTable build_measure_table(int order, int grid_size);

/// Orders 1..max_order on a shared grid (entry j-1 holds order j).
std::vector<MeasureTable> build_measure_tables(int max_order, int grid_size);

/// The y in [0, 1] with mu1([-x, x]) = 1 - mu^(i-1)([-y, y]), by bisection
/// on the interpolated CDF; table must have order i - 1.
double solve_y(int i, double x, const MeasureTable& table);

/// C_i = int_0^1 x y_i(x) d mu^(1)([-x, x]).
double compute_ci(int i, const MeasureTable& table_i_minus_1);
double compute_ci(int i, int grid_size);

}  // namespace ksign
