#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "feykac/errors.hpp"

namespace feykac::detail {

// Thomas elimination for a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i.
// a[0] and c[n-1] are ignored. The solution overwrites d; scratch is reused.
inline void solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                              std::span<const double> c, std::span<double> d,
                              std::vector<double>& scratch) {
  const std::size_t n = d.size();
  if (n == 0) return;
  scratch.resize(n);
  double denom = b[0];
  if (denom == 0.0) throw SolverDiagnostic("singular tridiagonal system");
  scratch[0] = c[0] / denom;
  d[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = b[i] - a[i] * scratch[i - 1];
    if (denom == 0.0) throw SolverDiagnostic("singular tridiagonal system");
    scratch[i] = (i + 1 < n) ? c[i] / denom : 0.0;
    d[i] = (d[i] - a[i] * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= scratch[i] * d[i + 1];
}

}  // namespace feykac::detail
