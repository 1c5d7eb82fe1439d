#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "feykac/detail/tridiagonal.hpp"
#include "feykac/grid.hpp"

namespace feykac::detail {

// Natural cubic spline through uniformly spaced samples; zero outside the
// sampled interval.
class UniformCubicSpline {
 public:
  explicit UniformCubicSpline(const GridFunction& f)
      : x0_(f.grid().x_min), x1_(f.grid().x_max), h_(f.spacing()), y_(f.values().begin(), f.values().end()) {
    const std::size_t n = y_.size();
    m_.assign(n, 0.0);
    if (n < 3) return;
    const std::size_t k = n - 2;
    std::vector<double> a(k, 1.0), b(k, 4.0), c(k, 1.0), d(k), scratch;
    const double s = 6.0 / (h_ * h_);
    for (std::size_t i = 0; i < k; ++i) d[i] = s * (y_[i + 2] - 2.0 * y_[i + 1] + y_[i]);
    solve_tridiagonal(a, b, c, d, scratch);
    for (std::size_t i = 0; i < k; ++i) m_[i + 1] = d[i];
  }

  double operator()(double x) const {
    if (!(x >= x0_ && x <= x1_)) return 0.0;
    const std::size_t last = y_.size() - 2;
    auto i = static_cast<std::size_t>((x - x0_) / h_);
    if (i > last) i = last;
    const double b = (x - x0_) / h_ - static_cast<double>(i);
    const double a = 1.0 - b;
    return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h_ * h_ / 6.0);
  }

 private:
  double x0_, x1_, h_;
  std::vector<double> y_;
  std::vector<double> m_;
};

}  // namespace feykac::detail
