#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "feykac/errors.hpp"

namespace feykac {

// Uniform truncated grid on [x_min, x_max]. The default resolves everything
// used here: exp(-x^2/2) < 1e-31 at |x| = 12 and h = 0.02.
struct Grid {
  double x_min = -12.0;
  double x_max = 12.0;
  std::size_t n_points = 1201;

  void validate() const {
    if (!(x_min < x_max)) throw ParameterError("grid requires x_min < x_max");
    if (n_points < 2) throw ParameterError("grid requires at least 2 points");
  }

  double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
  double x(std::size_t i) const { return x_min + spacing() * static_cast<double>(i); }
  double edge() const { return std::max(std::abs(x_min), std::abs(x_max)); }

  bool operator==(const Grid&) const = default;
};

// v(t, .) sampled on a Grid.
class GridFunction {
 public:
  GridFunction() = default;

  explicit GridFunction(Grid grid) : grid_(grid), values_(grid.n_points, 0.0) { grid_.validate(); }

  GridFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.n_points) {
      throw ParameterError("grid function needs " + std::to_string(grid_.n_points) + " values, got " +
                           std::to_string(values_.size()));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw ParameterError("grid function values must be finite");
    }
  }

  template <class F>
  static GridFunction tabulate(const Grid& grid, F&& f) {
    grid.validate();
    std::vector<double> values(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) values[i] = f(grid.x(i));
    return GridFunction(grid, std::move(values));
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return grid_.spacing(); }
  double x(std::size_t i) const { return grid_.x(i); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  // sqrt(h * sum v_i^2)
  double l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s * spacing());
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

inline double max_abs_difference(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) throw ParameterError("grid functions live on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace feykac
